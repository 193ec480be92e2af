#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "seampose/kinematics.hpp"

namespace seampose {

/// Running median over the trailing `window` predictions, per joint
/// coordinate. Outputs before the window fills use the available prefix.
template <typename S>
class RunningMedianFilter {
 public:
  explicit RunningMedianFilter(int window = 5) : window_(window) {}

  JointPositions<S> push(const JointPositions<S>& p) {
    buf_.push_back(p);
    if (static_cast<int>(buf_.size()) > window_) buf_.pop_front();
    JointPositions<S> out;
    const size_t n = buf_.size();
    std::vector<S> v(n);
    for (int k = 0; k < kJointDim; ++k) {
      for (size_t i = 0; i < n; ++i) v[i] = buf_[i].p(k);
      const size_t mid = (n - 1) / 2;
      std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
      out.p(k) = v[mid];
    }
    return out;
  }

  void reset() { buf_.clear(); }

 private:
  int window_;
  std::deque<JointPositions<S>> buf_;
};

template <typename S>
std::vector<JointPositions<S>> smooth_predictions(const std::vector<JointPositions<S>>& in,
                                                  int window = 5) {
  RunningMedianFilter<S> f(window);
  std::vector<JointPositions<S>> out;
  out.reserve(in.size());
  for (const auto& p : in) out.push_back(f.push(p));
  return out;
}

}  // namespace seampose
