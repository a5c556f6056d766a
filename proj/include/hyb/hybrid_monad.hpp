#pragma once

// H_S X: convergent (trajectory, value) pairs and divergent trajectories, with
// demand-driven evaluation. A Demand bounds how much of the time axis a caller
// will observe; computations that already cover it return Pending instead of
// running further.
//
// Pending elements are single-owner: resume may be called from one thread at a time.

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

#include "hyb/trajectory.hpp"

namespace hyb {

// ---- sums ----------------------------------------------------------------

template <class L, class R>
struct Either {
  std::variant<L, R> v;

  static Either left(L x) { return Either{std::variant<L, R>(std::in_place_index<0>, std::move(x))}; }
  static Either right(R x) { return Either{std::variant<L, R>(std::in_place_index<1>, std::move(x))}; }

  bool is_left() const { return v.index() == 0; }
  const L& left_value() const { return std::get<0>(v); }
  const R& right_value() const { return std::get<1>(v); }

  friend bool operator==(const Either&, const Either&) = default;
};

struct Bottom {
  friend bool operator==(const Bottom&, const Bottom&) = default;
};

template <class L, class R>
bool close_states(const Either<L, R>& a, const Either<L, R>& b, double rel = 1e-9) {
  if (a.is_left() != b.is_left()) return false;
  if (a.is_left()) return close_states(a.left_value(), b.left_value(), rel);
  return close_states(a.right_value(), b.right_value(), rel);
}

// ---- fuel and demand -----------------------------------------------------

class FuelMeter {
 public:
  explicit FuelMeter(std::uint64_t fuel = 1'000'000,
                     std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt)
      : remaining_(fuel), deadline_(deadline) {}

  /// Takes one unit. Returns false, permanently, once fuel or time is exhausted.
  bool consume() {
    if (exhausted_) return false;
    if (remaining_ == 0) {
      exhausted_ = true;
      return false;
    }
    if (deadline_ && (used_ & 1023) == 0 && std::chrono::steady_clock::now() > *deadline_) {
      exhausted_ = timed_out_ = true;
      return false;
    }
    --remaining_;
    ++used_;
    return true;
  }

  void count_unfolding() { ++unfoldings_; }

  bool exhausted() const { return exhausted_; }
  bool timed_out() const { return timed_out_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t unfoldings() const { return unfoldings_; }

 private:
  std::uint64_t remaining_;
  std::uint64_t used_ = 0;
  std::uint64_t unfoldings_ = 0;
  bool exhausted_ = false;
  bool timed_out_ = false;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

struct Demand {
  /// Time from the start of the element that the caller will look at.
  double horizon = std::numeric_limits<double>::infinity();
  FuelMeter* fuel = nullptr;

  bool consume() const { return fuel == nullptr || fuel->consume(); }
};

// ---- elements -------------------------------------------------------------

enum class Closure { open, closed };
enum class DivCause { semantic, fuel, timeout };

template <class S, class X>
class HElem;

template <class S, class X>
struct Converged {
  Trajectory<S> tr;
  X value;
};

/// Domain [0, d) when open, [0, d] with `endpoint` at d when closed.
template <class S>
struct Divergent {
  Trajectory<S> tr;
  Closure closure = Closure::open;
  std::optional<S> endpoint;
  DivCause cause = DivCause::semantic;
};

/// A prefix that strictly covers the demand it was computed for, and a way to compute more.
template <class S, class X>
struct Pending {
  Trajectory<S> prefix;
  std::function<HElem<S, X>(const Demand&)> resume;
};

template <class S, class X>
class HElem {
 public:
  using state_type = S;
  using value_type = X;
  using Node = std::variant<Converged<S, X>, Divergent<S>, Pending<S, X>>;

  HElem(Converged<S, X> c) : node_(std::move(c)) {}
  HElem(Divergent<S> d) : node_(std::move(d)) {}
  HElem(Pending<S, X> p) : node_(std::move(p)) {}

  const Node& node() const { return node_; }
  const Converged<S, X>* converged() const { return std::get_if<Converged<S, X>>(&node_); }
  const Divergent<S>* divergent() const { return std::get_if<Divergent<S>>(&node_); }
  const Pending<S, X>* pending() const { return std::get_if<Pending<S, X>>(&node_); }

  const Trajectory<S>& trajectory() const {
    return std::visit(
        [](const auto& n) -> const Trajectory<S>& {
          if constexpr (requires { n.prefix; })
            return n.prefix;
          else
            return n.tr;
        },
        node_);
  }

 private:
  Node node_;
};

template <class S, class X>
HElem<S, X> unit(X x) {
  return Converged<S, X>{Trajectory<S>{}, std::move(x)};
}

template <class S, class X>
HElem<S, X> instant_divergence() {
  return Divergent<S>{};
}

/// tr |> m : the monoid action of trajectories on H_S X.
template <class S, class X>
HElem<S, X> prepend(const Trajectory<S>& tr, const HElem<S, X>& m) {
  if (tr.empty()) return m;
  if (const auto* c = m.converged()) return Converged<S, X>{concat(tr, c->tr), c->value};
  if (const auto* d = m.divergent()) return Divergent<S>{concat(tr, d->tr), d->closure, d->endpoint, d->cause};
  const auto& p = *m.pending();
  auto resume = p.resume;
  return Pending<S, X>{concat(tr, p.prefix), [tr, resume](const Demand& d) -> HElem<S, X> {
                         const auto rest = tr.remaining_after(d.horizon);
                         return prepend(tr, resume(Demand{rest ? *rest : 0.0, d.fuel}));
                       }};
}

/// Retypes a divergent element.
template <class S, class Y>
HElem<S, Y> divergent_as(const Divergent<S>& d) {
  return d;
}

/// f*(m) observed up to demand.horizon. f is called as f(x, demand) with the demand left after m's trajectory.
template <class S, class X, class F>
auto bind(const HElem<S, X>& m, F f, const Demand& demand)
    -> std::decay_t<decltype(f(std::declval<const X&>(), demand))> {
  using R = std::decay_t<decltype(f(std::declval<const X&>(), demand))>;
  if (const auto* c = m.converged()) {
    const auto rest = c->tr.remaining_after(demand.horizon);
    if (!rest) {
      return Pending<S, typename R::value_type>{
          c->tr, [m, f](const Demand& d) { return bind(m, f, d); }};
    }
    return prepend(c->tr, f(c->value, Demand{*rest, demand.fuel}));
  }
  if (const auto* d = m.divergent()) return R(*d);
  const auto& p = *m.pending();
  auto resume = p.resume;
  return Pending<S, typename R::value_type>{p.prefix,
                                           [resume, f](const Demand& d) { return bind(resume(d), f, d); }};
}

/// Demand-free Kleisli lifting for finite elements.
template <class S, class X, class F>
auto kleisli(F f, const HElem<S, X>& m) {
  return bind(m, [f](const X& x, const Demand&) { return f(x); }, Demand{});
}

/// H_S g on values.
template <class S, class X, class G>
auto map_value(const HElem<S, X>& m, G g) -> HElem<S, std::decay_t<decltype(g(std::declval<const X&>()))>> {
  using Y = std::decay_t<decltype(g(std::declval<const X&>()))>;
  if (const auto* c = m.converged()) return Converged<S, Y>{c->tr, g(c->value)};
  if (const auto* d = m.divergent()) return *d;
  auto resume = m.pending()->resume;
  return Pending<S, Y>{m.pending()->prefix, [resume, g](const Demand& d) { return map_value(resume(d), g); }};
}

/// H_g id : H_S X -> H_T X on states.
template <class S, class X, class G>
auto map_states(const HElem<S, X>& m, G g) -> HElem<std::decay_t<decltype(g(std::declval<const S&>()))>, X> {
  using T = std::decay_t<decltype(g(std::declval<const S&>()))>;
  if (const auto* c = m.converged()) return Converged<T, X>{c->tr.map(g), c->value};
  if (const auto* d = m.divergent()) {
    std::optional<T> ep;
    if (d->endpoint) ep = g(*d->endpoint);
    return Divergent<T>{d->tr.map(g), d->closure, ep, d->cause};
  }
  auto resume = m.pending()->resume;
  return Pending<T, X>{m.pending()->prefix.map(g), [resume, g](const Demand& d) { return map_states(resume(d), g); }};
}

// ---- Elgot iteration --------------------------------------------------------

/// f dagger from x0: repeatedly applies f, concatenating trajectories, until a left value is produced,
/// the accumulated trajectory covers the demand, or fuel runs out. One fuel unit per application of f.
template <class S, class X, class F>
using ElgotResult = HElem<S, std::decay_t<decltype(std::declval<typename std::invoke_result_t<F, const X&, const Demand&>::value_type>()
                                                        .left_value())>>;

template <class S, class X, class F>
ElgotResult<S, X, F> elgot(F f, const X& x0, const Demand& demand) {
  using Step = std::invoke_result_t<F, const X&, const Demand&>;
  using Result = ElgotResult<S, X, F>;
  using Y = typename Result::value_type;

  Trajectory<S> acc;
  double rest = demand.horizon;
  X x = x0;
  bool last_zero = false;
  auto resume = [f, x0](const Demand& d) -> Result { return elgot<S>(f, x0, d); };
  for (;;) {
    if (!demand.consume()) {
      Divergent<S> div{acc, Closure::open, std::nullopt,
                       demand.fuel && demand.fuel->timed_out() ? DivCause::timeout : DivCause::fuel};
      if constexpr (std::is_same_v<X, S>) {
        if (last_zero && !acc.empty()) {
          div.closure = Closure::closed;
          div.endpoint = x;
        }
      }
      return Result(std::move(div));
    }
    if (demand.fuel) demand.fuel->count_unfolding();
    Step step = f(x, Demand{rest, demand.fuel});
    if (const auto* c = step.converged()) {
      acc.append(c->tr);
      const auto after = c->tr.remaining_after(rest);
      if (!after) return Result(Pending<S, Y>{acc, resume});
      rest = *after;
      if (c->value.is_left()) return Result(Converged<S, Y>{acc, c->value.left_value()});
      last_zero = c->tr.empty();
      x = c->value.right_value();
      continue;
    }
    if (const auto* d = step.divergent()) {
      return Result(Divergent<S>{concat(acc, d->tr), d->closure, d->endpoint, d->cause});
    }
    return Result(Pending<S, Y>{concat(acc, step.pending()->prefix), resume});
  }
}

// ---- iota and tau -------------------------------------------------------------

/// Initial point of a nonempty domain, the value of an instantly converging element, bottom otherwise.
template <class S, class X>
Either<X, Either<S, Bottom>> iota(const HElem<S, X>& m) {
  using R = Either<X, Either<S, Bottom>>;
  if (auto s = m.trajectory().initial()) return R::right(Either<S, Bottom>::left(*s));
  if (const auto* c = m.converged()) return R::left(c->value);
  if (const auto* d = m.divergent(); d && d->closure == Closure::closed && d->endpoint) {
    return R::right(Either<S, Bottom>::left(*d->endpoint));
  }
  return R::right(Either<S, Bottom>::right(Bottom{}));
}

class UndetectableCut : public std::runtime_error {
 public:
  UndetectableCut() : std::runtime_error("side changes inside a non-constant segment below probe resolution") {}
};

namespace detail {

/// Side of a segment: true if every probed point is a left value. Throws UndetectableCut on mixed probes.
template <class S, class Y>
bool segment_is_left(const Segment<Either<S, Y>>& seg) {
  const bool first = seg.law->at(0.0).is_left();
  if (seg.law->constant()) return first;
  for (double frac : {0.125, 0.25, 0.5, 0.75, 0.875, 0.999}) {
    if (seg.law->at(seg.dur * frac).is_left() != first) throw UndetectableCut();
  }
  return first;
}

/// Longest all-left prefix of tr with the injection stripped, and whether it is all of tr.
template <class S, class Y>
std::pair<Trajectory<S>, bool> left_prefix(const Trajectory<Either<S, Y>>& tr) {
  Trajectory<S> out;
  std::function<S(const Either<S, Y>&)> strip = [](const Either<S, Y>& e) { return e.left_value(); };
  for (const auto& seg : tr.segments()) {
    if (!segment_is_left(seg)) return {std::move(out), false};
    out.append(Segment<S>{seg.dur, std::make_shared<MappedLaw<S, Either<S, Y>>>(seg.law, strip)});
  }
  return {std::move(out), true};
}

}  // namespace detail

/// tau : H_{S+Y} X -> H_S X, the largest prefix lying in the left summand.
template <class S, class Y, class X>
HElem<S, X> tau(const HElem<Either<S, Y>, X>& m) {
  auto [prefix, whole] = detail::left_prefix(m.trajectory());
  if (!whole) return Divergent<S>{std::move(prefix), Closure::open, std::nullopt, DivCause::semantic};
  if (const auto* c = m.converged()) return Converged<S, X>{std::move(prefix), c->value};
  if (const auto* d = m.divergent()) {
    if (d->closure == Closure::closed && d->endpoint && d->endpoint->is_left()) {
      return Divergent<S>{std::move(prefix), Closure::closed, d->endpoint->left_value(), d->cause};
    }
    return Divergent<S>{std::move(prefix), Closure::open, std::nullopt, d->cause};
  }
  auto resume = m.pending()->resume;
  return Pending<S, X>{std::move(prefix), [resume](const Demand& d) { return tau(resume(d)); }};
}

// ---- the classic hybrid monad H and theta -----------------------------------

/// inl <[0,d], e> when convergent, inr <[0,d), e> or inr <[0,d], e> when divergent.
/// The point at d, when the domain is closed, is `endpoint`.
template <class S>
struct HClassic {
  bool convergent = true;
  Trajectory<S> tr;
  std::optional<S> endpoint;
  DivCause cause = DivCause::semantic;

  bool closed() const { return endpoint.has_value(); }
  bool instant_divergence() const { return !convergent && tr.empty() && !endpoint; }
  /// e^0, or nothing for the empty domain.
  std::optional<S> initial() const {
    if (auto s = tr.initial()) return s;
    return endpoint;
  }
};

template <class S>
HClassic<S> theta(const HElem<S, S>& m) {
  if (const auto* c = m.converged()) return HClassic<S>{true, c->tr, c->value, DivCause::semantic};
  if (const auto* d = m.divergent()) {
    std::optional<S> ep;
    if (d->closure == Closure::closed) ep = d->endpoint;
    return HClassic<S>{false, d->tr, ep, d->cause};
  }
  throw std::invalid_argument("theta: element still pending");
}

template <class S>
HElem<S, S> theta_inv(const HClassic<S>& h) {
  if (h.convergent) return Converged<S, S>{h.tr, *h.endpoint};
  if (h.endpoint) return Divergent<S>{h.tr, Closure::closed, h.endpoint, h.cause};
  return Divergent<S>{h.tr, Closure::open, std::nullopt, h.cause};
}

/// Kleisli lifting of H. The cut I' is located per segment; a segment either survives whole or is cut at
/// its start. Throws UndetectableCut when instant divergence changes inside a non-constant segment.
template <class S, class F>
HClassic<S> classic_kleisli(F f, const HClassic<S>& m) {
  auto diverges_at = [&](const S& s) { return f(s).instant_divergence(); };
  std::function<S(const S&)> head = [f](const S& s) { return *f(s).initial(); };
  Trajectory<S> out;
  for (const auto& seg : m.tr.segments()) {
    const bool first = diverges_at(seg.law->at(0.0));
    if (!seg.law->constant()) {
      for (double frac : {0.125, 0.25, 0.5, 0.75, 0.875, 0.999})
        if (diverges_at(seg.law->at(seg.dur * frac)) != first) throw UndetectableCut();
    }
    if (first) return HClassic<S>{false, std::move(out), std::nullopt, DivCause::semantic};
    out.append(Segment<S>{seg.dur, std::make_shared<MappedLaw<S, S>>(seg.law, head)});
  }
  if (!m.endpoint) return HClassic<S>{false, std::move(out), std::nullopt, m.cause};
  const HClassic<S> tail = f(*m.endpoint);
  if (tail.instant_divergence()) return HClassic<S>{false, std::move(out), std::nullopt, DivCause::semantic};
  if (!m.convergent) return HClassic<S>{false, std::move(out), tail.initial(), m.cause};
  out.append(tail.tr);
  return HClassic<S>{tail.convergent, std::move(out), tail.endpoint, tail.cause};
}

/// The Kleisli lifting on S -> H_S S obtained from H_S: f*_S . tau . H_{iota' . f} id.
template <class S, class F>
HElem<S, S> state_kleisli(F f, const HElem<S, S>& m) {
  auto iota_prime = [f](const S& s) -> Either<S, Bottom> {
    const auto r = iota(f(s));
    if (r.is_left()) return Either<S, Bottom>::left(r.left_value());
    return r.right_value();
  };
  return kleisli(f, tau(map_states(m, iota_prime)));
}

// ---- observation --------------------------------------------------------------

enum class Shape { converged, divergent_open, divergent_closed, pending };

template <class S, class X>
Shape shape(const HElem<S, X>& m) {
  if (m.converged()) return Shape::converged;
  if (const auto* d = m.divergent()) return d->closure == Closure::closed ? Shape::divergent_closed : Shape::divergent_open;
  return Shape::pending;
}

/// Extensional equality of two elements as far as horizon h is observable. Pending elements are compared on
/// their common prefix up to h; everything else must match in shape, probes, value and endpoint.
template <class S, class X>
bool observably_equal(const HElem<S, X>& a, const HElem<S, X>& b, double h = std::numeric_limits<double>::infinity(),
                      std::uint64_t seed = 0x5eed) {
  const bool pa = a.pending() != nullptr;
  const bool pb = b.pending() != nullptr;
  if (pa || pb) {
    if (!(pa && pb)) return false;
    const double lim = std::min({h, a.trajectory().total(), b.trajectory().total()});
    return probe_equal(a.trajectory().truncate(lim), b.trajectory().truncate(lim), seed);
  }
  if (shape(a) != shape(b)) return false;
  if (!probe_equal(a.trajectory(), b.trajectory(), seed)) return false;
  if (const auto* ca = a.converged()) return close_states(ca->value, b.converged()->value);
  const auto* da = a.divergent();
  const auto* db = b.divergent();
  if (da->closure == Closure::closed) {
    if (da->endpoint.has_value() != db->endpoint.has_value()) return false;
    if (da->endpoint && !close_states(*da->endpoint, *db->endpoint)) return false;
  }
  return true;
}

template <class S>
bool observably_equal(const HClassic<S>& a, const HClassic<S>& b, std::uint64_t seed = 0x5eed) {
  if (a.convergent != b.convergent || a.closed() != b.closed()) return false;
  if (!probe_equal(a.tr, b.tr, seed)) return false;
  return !a.endpoint || close_states(*a.endpoint, *b.endpoint);
}

}  // namespace hyb
