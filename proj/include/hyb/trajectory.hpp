#pragma once

// Finite open trajectories [0, total) -> S as lists of closed-form segments.
//
// Positions are located by subtracting segment durations one by one from the
// query time, the same arithmetic the operational semantics performs on its
// time budget, so boundary decisions agree bit for bit.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyb/linear_dynamics.hpp"

namespace hyb {

class OutOfDomain : public std::out_of_range {
 public:
  explicit OutOfDomain(double t) : std::out_of_range("time " + format_number(t) + " outside trajectory domain") {}
};

template <class S>
class SegmentLaw {
 public:
  virtual ~SegmentLaw() = default;
  /// State at local offset in [0, dur).
  virtual S at(double offset) const = 0;
  virtual bool constant() const { return false; }
};

template <class S>
class ConstLaw final : public SegmentLaw<S> {
 public:
  explicit ConstLaw(S value) : value_(std::move(value)) {}
  S at(double) const override { return value_; }
  bool constant() const override { return true; }

 private:
  S value_;
};

class FlowLaw final : public SegmentLaw<Env> {
 public:
  explicit FlowLaw(FlowFn flow) : flow_(std::move(flow)) {}
  Env at(double offset) const override { return flow_.at(offset); }

 private:
  FlowFn flow_;
};

/// Pointwise image of another law.
template <class S, class T>
class MappedLaw final : public SegmentLaw<S> {
 public:
  MappedLaw(std::shared_ptr<const SegmentLaw<T>> base, std::function<S(const T&)> fn)
      : base_(std::move(base)), fn_(std::move(fn)) {}
  S at(double offset) const override { return fn_(base_->at(offset)); }
  bool constant() const override { return base_->constant(); }

 private:
  std::shared_ptr<const SegmentLaw<T>> base_;
  std::function<S(const T&)> fn_;
};

template <class S>
struct Segment {
  double dur = 0.0;
  std::shared_ptr<const SegmentLaw<S>> law;
};

template <class S>
class Trajectory {
 public:
  Trajectory() = default;

  static Trajectory constant(S value, double dur) {
    Trajectory tr;
    tr.append(Segment<S>{dur, std::make_shared<ConstLaw<S>>(std::move(value))});
    return tr;
  }

  /// Appends a segment; zero-length segments are dropped.
  void append(Segment<S> seg) {
    if (!(seg.dur >= 0.0) || std::isinf(seg.dur)) throw std::invalid_argument("segment duration must be finite and >= 0");
    if (seg.dur == 0.0) return;
    total_ += seg.dur;
    segs_.push_back(std::move(seg));
  }
  void append(const Trajectory& other) {
    segs_.insert(segs_.end(), other.segs_.begin(), other.segs_.end());
    total_ += other.total_;
  }

  bool empty() const { return segs_.empty(); }
  double total() const { return total_; }
  const std::vector<Segment<S>>& segments() const { return segs_; }

  /// Budget h minus every segment duration in order; nullopt if h falls inside the trajectory.
  std::optional<double> remaining_after(double h) const {
    for (const auto& s : segs_) {
      if (h < s.dur) return std::nullopt;
      h = h - s.dur;
    }
    return h;
  }

  /// tau lies in [0, total).
  bool covers(double tau) const {
    if (tau < 0.0) return false;
    for (const auto& s : segs_) {
      if (tau < s.dur) return true;
      tau = tau - s.dur;
    }
    return false;
  }

  S at(double tau) const {
    if (tau < 0.0 || std::isnan(tau)) throw OutOfDomain(tau);
    const double orig = tau;
    for (const auto& s : segs_) {
      if (tau < s.dur) return s.law->at(tau);
      tau = tau - s.dur;
    }
    throw OutOfDomain(orig);
  }

  std::optional<S> initial() const {
    if (segs_.empty()) return std::nullopt;
    return segs_.front().law->at(0.0);
  }

  /// Prefix of duration d.
  Trajectory truncate(double d) const {
    if (d < 0.0 || d > total_) throw OutOfDomain(d);
    Trajectory out;
    for (const auto& s : segs_) {
      if (d <= 0.0) break;
      if (d < s.dur) {
        out.append(Segment<S>{d, s.law});
        break;
      }
      out.append(s);
      d = d - s.dur;
    }
    return out;
  }

  template <class F>
  auto map(F fn) const {
    using T = std::decay_t<decltype(fn(std::declval<const S&>()))>;
    Trajectory<T> out;
    std::function<T(const S&)> f = fn;
    for (const auto& s : segs_) out.append(Segment<T>{s.dur, std::make_shared<MappedLaw<T, S>>(s.law, f)});
    return out;
  }

 private:
  std::vector<Segment<S>> segs_;
  double total_ = 0.0;
};

template <class S>
Trajectory<S> concat(const Trajectory<S>& a, const Trajectory<S>& b) {
  Trajectory<S> out = a;
  out.append(b);
  return out;
}

// ---- probe comparison ---------------------------------------------------

using ProbeSet = std::vector<double>;

/// Segment starts and midpoints of both trajectories plus `random_count` uniform points, clipped to [0, limit).
template <class A, class B>
ProbeSet make_probes(const Trajectory<A>& a, const Trajectory<B>& b, double limit, std::uint64_t seed,
                     std::size_t random_count = 16) {
  ProbeSet out;
  auto add_bounds = [&](const auto& tr) {
    double start = 0.0;
    for (const auto& s : tr.segments()) {
      out.push_back(start);
      out.push_back(start + s.dur / 2);
      start += s.dur;
    }
  };
  add_bounds(a);
  add_bounds(b);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < random_count; ++i) out.push_back(u(rng) * limit);
  std::erase_if(out, [&](double t) { return !(t >= 0.0 && t < limit); });
  return out;
}

inline bool close_values(double a, double b, double rel = 1e-9) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool close_states(const Env& a, const Env& b, double rel = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close_values(a[i], b[i], rel)) return false;
  return true;
}

template <class S>
bool close_states(const S& a, const S& b, double = 1e-9)
  requires requires { a == b; }
{
  return a == b;
}

/// a.total <= b.total and the two agree on every probe (all probes must lie in a's domain).
template <class S>
bool prefix_le(const Trajectory<S>& a, const Trajectory<S>& b, const ProbeSet& probes, double rel = 1e-9) {
  if (a.total() > b.total()) return false;
  for (double t : probes) {
    if (!a.covers(t)) continue;
    if (!close_states(a.at(t), b.at(t), rel)) return false;
  }
  return true;
}

/// Same duration (up to rel) and agreement on shared probes plus 16 random ones.
template <class S>
bool probe_equal(const Trajectory<S>& a, const Trajectory<S>& b, std::uint64_t seed = 0x5eed, double rel = 1e-9) {
  if (!close_values(a.total(), b.total(), 1e-12)) return false;
  const double limit = std::min(a.total(), b.total());
  for (double t : make_probes(a, b, limit, seed)) {
    if (!a.covers(t) || !b.covers(t)) continue;
    if (!close_states(a.at(t), b.at(t), rel)) return false;
  }
  return true;
}

}  // namespace hyb
