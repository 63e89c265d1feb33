#include "tamdag/info_source.hpp"

#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace tamdag {

struct InfoSource::State {
  std::optional<JointDist> joint;
  std::optional<Dataset> data;
  EstimatorKind kind = EstimatorKind::PlugIn;
  int d = 0;
  std::mutex mutex;
  std::unordered_map<std::uint64_t, double> cache;
};

InfoSource InfoSource::exact(JointDist joint) {
  auto state = std::make_shared<State>();
  state->d = joint.size();
  state->joint = std::move(joint);
  return InfoSource(std::move(state));
}

InfoSource InfoSource::exact(const TabularBN& bn, std::size_t cap) { return exact(joint_table(bn, cap)); }

InfoSource InfoSource::empirical(Dataset data, EstimatorKind kind) {
  auto state = std::make_shared<State>();
  state->d = data.cols();
  state->kind = kind;
  state->data = std::move(data);
  return InfoSource(std::move(state));
}

int InfoSource::size() const { return state_->d; }
bool InfoSource::is_exact() const { return state_->joint.has_value(); }
std::size_t InfoSource::sample_size() const { return state_->data ? state_->data->rows() : 0; }
EstimatorKind InfoSource::estimator() const { return state_->kind; }
const JointDist* InfoSource::joint() const { return state_->joint ? &*state_->joint : nullptr; }
const Dataset* InfoSource::data() const { return state_->data ? &*state_->data : nullptr; }

std::size_t InfoSource::evaluations() const {
  std::lock_guard lock(state_->mutex);
  return state_->cache.size();
}

double InfoSource::entropy(NodeSet s) const {
  if (s.empty()) return 0.0;
  if (!s.is_subset_of(NodeSet::range(state_->d))) throw std::out_of_range("InfoSource: node out of range");
  {
    std::lock_guard lock(state_->mutex);
    if (auto it = state_->cache.find(s.bits()); it != state_->cache.end()) return it->second;
  }
  // Computed outside the lock; a concurrent duplicate computes the same value.
  const double h = state_->joint ? tamdag::entropy(*state_->joint, s)
                                 : empirical_entropy(*state_->data, s, state_->kind);
  std::lock_guard lock(state_->mutex);
  state_->cache.emplace(s.bits(), h);
  return h;
}

double InfoSource::cond_entropy(NodeSet k, NodeSet a) const {
  if (!k.disjoint(a)) throw std::invalid_argument("cond_entropy: sets overlap");
  const double v = entropy(k | a) - entropy(a);
  return v < 0.0 ? 0.0 : v;
}

double InfoSource::cmi(NodeSet k, NodeSet l, NodeSet a) const {
  if (!k.disjoint(l) || !k.disjoint(a) || !l.disjoint(a)) throw std::invalid_argument("cmi: sets overlap");
  const double v = (entropy(k | a) + entropy(l | a)) - (entropy(a) + entropy(k | l | a));
  return v < 0.0 ? 0.0 : v;
}

}  // namespace tamdag
