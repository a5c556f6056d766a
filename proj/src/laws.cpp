#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "hyb/harness.hpp"
#include "hyb/hybrid_monad.hpp"

namespace hyb {

namespace {

using Tr = Trajectory<Env>;
using SumState = Either<Env, int>;
using H = HElem<Env, Env>;
using HSum = HElem<SumState, Env>;
using Loop = HElem<Env, Either<Env, Env>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : g_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(g_); }
  double duration() { return 0.25 * integer(1, 8); }
  Env state() { return Env(std::vector<double>{double(integer(-3, 3)), double(integer(-3, 3))}); }
  std::array<int, 2> offset() { return {integer(-2, 2), integer(-2, 2)}; }
  std::uint64_t seed() { return g_(); }

 private:
  std::mt19937_64 g_;
};

Env shift(const Env& s, const std::array<int, 2>& o) { return Env(std::vector<double>{s[0] + o[0], s[1] + o[1]}); }

int bucket(const Env& s) {
  const long v = static_cast<long>(s[0]) * 3 + static_cast<long>(s[1]) * 7;
  return static_cast<int>(((v % 4) + 4) % 4);
}

Tr rand_traj(Rand& r, int max_segments = 3) {
  Tr tr;
  const int n = r.integer(0, max_segments);
  for (int i = 0; i < n; ++i) tr.append(Tr::constant(r.state(), r.duration()));
  return tr;
}

Trajectory<SumState> rand_sum_traj(Rand& r, int max_segments = 3) {
  Trajectory<SumState> tr;
  const int n = r.integer(0, max_segments);
  for (int i = 0; i < n; ++i) {
    SumState v = r.unit() < 0.75 ? SumState::left(r.state()) : SumState::right(r.integer(0, 9));
    tr.append(Trajectory<SumState>::constant(v, r.duration()));
  }
  return tr;
}

H rand_elem(Rand& r) {
  Tr tr = rand_traj(r);
  const double k = r.unit();
  if (k < 0.5) return Converged<Env, Env>{tr, r.state()};
  if (k < 0.75) return Divergent<Env>{tr, Closure::open, std::nullopt, DivCause::semantic};
  return Divergent<Env>{tr, Closure::closed, r.state(), DivCause::semantic};
}

HSum rand_sum_elem(Rand& r) {
  auto tr = rand_sum_traj(r);
  const double k = r.unit();
  if (k < 0.5) return Converged<SumState, Env>{tr, r.state()};
  if (k < 0.75) return Divergent<SumState>{tr, Closure::open, std::nullopt, DivCause::semantic};
  SumState ep = r.unit() < 0.7 ? SumState::left(r.state()) : SumState::right(r.integer(0, 9));
  return Divergent<SumState>{tr, Closure::closed, ep, DivCause::semantic};
}

// Deterministic random functions, piecewise in the state through `bucket`.
struct Piece {
  int kind = 0;  // 0 instant convergence, 1 convergent, 2 open divergent, 3 closed divergent, 4 instant divergence
  double dur1 = 0.25, dur2 = 0.0;
  std::array<int, 2> off1{}, off2{}, offv{};
  bool right1 = false, right2 = false, right_end = false;
  int tag = 0;
};

Piece rand_piece(Rand& r, bool allow_instant_divergence = true) {
  Piece p;
  const double k = r.unit();
  p.kind = k < 0.2 ? 0 : k < 0.6 ? 1 : k < 0.75 ? 2 : k < 0.9 ? 3 : 4;
  if (!allow_instant_divergence && p.kind == 4) p.kind = 1;
  p.dur1 = r.duration();
  p.dur2 = r.unit() < 0.5 ? 0.0 : r.duration();
  p.off1 = r.offset();
  p.off2 = r.offset();
  p.offv = r.offset();
  p.right1 = r.unit() < 0.2;
  p.right2 = r.unit() < 0.3;
  p.right_end = r.unit() < 0.3;
  p.tag = r.integer(0, 9);
  return p;
}

struct RandFn {
  std::array<Piece, 4> pieces;

  static RandFn make(Rand& r, bool allow_instant_divergence = true) {
    RandFn f;
    for (auto& p : f.pieces) p = rand_piece(r, allow_instant_divergence);
    return f;
  }

  H operator()(const Env& s) const {
    const Piece& p = pieces[bucket(s)];
    Tr tr;
    if (p.kind >= 1 && p.kind <= 3) {
      tr.append(Tr::constant(shift(s, p.off1), p.dur1));
      if (p.dur2 > 0) tr.append(Tr::constant(shift(s, p.off2), p.dur2));
    }
    switch (p.kind) {
      case 0: return Converged<Env, Env>{Tr{}, shift(s, p.offv)};
      case 1: return Converged<Env, Env>{tr, shift(s, p.offv)};
      case 2: return Divergent<Env>{tr, Closure::open, std::nullopt, DivCause::semantic};
      case 3: return Divergent<Env>{tr, Closure::closed, shift(s, p.offv), DivCause::semantic};
      default: return Divergent<Env>{};
    }
  }
};

struct RandSumFn {
  std::array<Piece, 4> pieces;

  static RandSumFn make(Rand& r) {
    RandSumFn f;
    for (auto& p : f.pieces) p = rand_piece(r);
    return f;
  }

  HSum operator()(const Env& s) const {
    const Piece& p = pieces[bucket(s)];
    auto point = [&](bool right, const std::array<int, 2>& off) {
      return right ? SumState::right(p.tag) : SumState::left(shift(s, off));
    };
    Trajectory<SumState> tr;
    if (p.kind >= 1 && p.kind <= 3) {
      tr.append(Trajectory<SumState>::constant(point(p.right1, p.off1), p.dur1));
      if (p.dur2 > 0) tr.append(Trajectory<SumState>::constant(point(p.right2, p.off2), p.dur2));
    }
    switch (p.kind) {
      case 0: return Converged<SumState, Env>{{}, shift(s, p.offv)};
      case 1: return Converged<SumState, Env>{tr, shift(s, p.offv)};
      case 2: return Divergent<SumState>{tr, Closure::open, std::nullopt, DivCause::semantic};
      case 3: return Divergent<SumState>{tr, Closure::closed, point(p.right_end, p.offv), DivCause::semantic};
      default: return Divergent<SumState>{};
    }
  }
};

struct RandStateMap {
  std::array<Piece, 4> pieces;

  static RandStateMap make(Rand& r) {
    RandStateMap f;
    for (auto& p : f.pieces) p = rand_piece(r);
    return f;
  }

  SumState operator()(const Env& s) const {
    const Piece& p = pieces[bucket(s)];
    return p.right1 ? SumState::right(p.tag) : SumState::left(shift(s, p.off1));
  }
};

// Loop bodies for Elgot iteration. Continuing steps increase x[0], which moves through every bucket.
struct RandLoop {
  std::array<int, 4> kinds{};  // 0 exit now, 1 exit after a segment, 2 continue after a segment,
                               // 3 continue instantly, 4 diverge open, 5 diverge closed, 6 instant self-loop
  std::array<double, 4> durs{};

  static RandLoop make(Rand& r) {
    RandLoop f;
    for (int i = 0; i < 4; ++i) {
      const double k = r.unit();
      f.kinds[i] = k < 0.1 ? 0 : k < 0.2 ? 1 : k < 0.65 ? 2 : k < 0.8 ? 3 : k < 0.87 ? 4 : k < 0.94 ? 5 : 6;
      f.durs[i] = r.duration();
    }
    return f;
  }

  Loop operator()(const Env& s, const Demand& = {}) const {
    const int b = bucket(s);
    using E = Either<Env, Env>;
    const Env next(std::vector<double>{s[0] + 1, s[1]});
    switch (kinds[b]) {
      case 0: return Converged<Env, E>{{}, E::left(s)};
      case 1: return Converged<Env, E>{Tr::constant(s, durs[b]), E::left(s)};
      case 2: return Converged<Env, E>{Tr::constant(s, durs[b]), E::right(next)};
      case 3: return Converged<Env, E>{{}, E::right(next)};
      case 4: return Divergent<Env>{Tr::constant(s, durs[b]), Closure::open, std::nullopt, DivCause::semantic};
      case 5: return Divergent<Env>{Tr::constant(s, durs[b]), Closure::closed, next, DivCause::semantic};
      default: return Converged<Env, E>{{}, E::right(s)};
    }
  }
};

std::string show(const H& m) {
  std::ostringstream out;
  const char* kinds[] = {"conv", "div-open", "div-closed", "pending"};
  out << kinds[static_cast<int>(shape(m))] << " dur=" << format_number(m.trajectory().total())
      << " segs=" << m.trajectory().segments().size();
  if (const auto* c = m.converged()) out << " value=(" << format_number(c->value[0]) << "," << format_number(c->value[1]) << ")";
  return out.str();
}

// ---- the operations under test, with their mutants ----------------------------

struct Ops {
  Mutation mut;

  Tr concat_tr(const Tr& a, const Tr& b) const {
    if (mut == Mutation::concat_drops_segment && !a.empty()) {
      Tr shortened;
      for (std::size_t i = 0; i + 1 < a.segments().size(); ++i) shortened.append(a.segments()[i]);
      return concat(shortened, b);
    }
    return concat(a, b);
  }

  template <class X>
  HElem<Env, X> act(const Tr& tr, const HElem<Env, X>& e) const {
    if (mut == Mutation::action_wrong_side) {
      if (const auto* c = e.converged()) return Converged<Env, X>{concat(c->tr, tr), c->value};
      if (const auto* d = e.divergent()) return Divergent<Env>{concat(d->tr, tr), d->closure, d->endpoint, d->cause};
    }
    return prepend(tr, e);
  }

  template <class F>
  H kl(F f, const H& m) const {
    if (mut == Mutation::kleisli_drops_prefix) {
      if (const auto* c = m.converged()) return f(c->value);
    }
    return kleisli(f, m);
  }

  Either<Env, Either<Env, Bottom>> io(const H& m) const {
    if (mut == Mutation::iota_last_point && !m.trajectory().empty()) {
      const auto& segs = m.trajectory().segments();
      return Either<Env, Either<Env, Bottom>>::right(Either<Env, Bottom>::left(segs.back().law->at(0.0)));
    }
    return iota(m);
  }

  template <class X>
  HElem<Env, X> ta(const HElem<SumState, X>& m) const {
    if (mut == Mutation::tau_keeps_converged) {
      if (const auto* c = m.converged()) {
        auto [prefix, whole] = detail::left_prefix(c->tr);
        return Converged<Env, X>{prefix, c->value};
      }
    }
    if (mut == Mutation::tau_filters_right) {
      Tr kept;
      std::function<Env(const SumState&)> strip = [](const SumState& e) { return e.left_value(); };
      for (const auto& seg : m.trajectory().segments()) {
        if (seg.law->at(0.0).is_left())
          kept.append(Segment<Env>{seg.dur, std::make_shared<MappedLaw<Env, SumState>>(seg.law, strip)});
      }
      if (const auto* c = m.converged()) return Converged<Env, X>{kept, c->value};
      return Divergent<Env>{kept, Closure::open, std::nullopt, DivCause::semantic};
    }
    return tau(m);
  }

  H th_inv(const HClassic<Env>& h) const {
    if (mut == Mutation::theta_drops_endpoint && !h.convergent) {
      return Divergent<Env>{h.tr, Closure::open, std::nullopt, h.cause};
    }
    return theta_inv(h);
  }

  template <class F>
  H iterate(F f, const Env& x0, const Demand& demand) const {
    if (mut != Mutation::elgot_drops_prefix) return elgot<Env>(f, x0, demand);
    Tr last;
    Env x = x0;
    double rest = demand.horizon;
    for (;;) {
      if (!demand.consume()) return Divergent<Env>{last, Closure::open, std::nullopt, DivCause::fuel};
      Loop step = f(x, Demand{rest, demand.fuel});
      if (const auto* c = step.converged()) {
        last = c->tr;
        const auto after = c->tr.remaining_after(rest);
        if (!after) return Pending<Env, Env>{last, [](const Demand&) -> H { return Divergent<Env>{}; }};
        rest = *after;
        if (c->value.is_left()) return Converged<Env, Env>{last, c->value.left_value()};
        x = c->value.right_value();
        continue;
      }
      return Divergent<Env>{step.divergent()->tr, step.divergent()->closure, step.divergent()->endpoint,
                            step.divergent()->cause};
    }
  }
};

// ---- reporting ---------------------------------------------------------------------

class Recorder {
 public:
  explicit Recorder(LawReport& report) : report_(report) {}

  void check(const std::string& suite, const std::string& law, bool ok, const std::function<std::string()>& detail) {
    auto key = suite + "/" + law;
    auto it = index_.find(key);
    if (it == index_.end()) {
      it = index_.emplace(key, report_.laws.size()).first;
      report_.laws.push_back(LawResult{suite, law, 0, 0, ""});
    }
    LawResult& r = report_.laws[it->second];
    if (ok) {
      ++r.passed;
    } else {
      if (r.failed++ == 0) r.first_failure = detail();
    }
  }

  void branch(const std::string& name) { ++branches_[name]; }

  void finish() {
    for (auto& [k, v] : branches_) report_.branches.emplace_back(k, v);
  }

 private:
  LawReport& report_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::uint64_t> branches_;
};

bool same_segments(const Tr& a, const Tr& b) {
  if (a.total() != b.total() || a.segments().size() != b.segments().size()) return false;
  for (std::size_t i = 0; i < a.segments().size(); ++i) {
    if (a.segments()[i].dur != b.segments()[i].dur || a.segments()[i].law != b.segments()[i].law) return false;
  }
  return true;
}

template <class X>
bool fuel_approximation(const HElem<Env, X>& m) {
  const auto* d = m.divergent();
  return d && d->cause != DivCause::semantic;
}

// ---- suites ---------------------------------------------------------------------------

void trajectory_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const Tr a = rand_traj(r), b = rand_traj(r), c = rand_traj(r);
  const std::uint64_t seed = r.seed();
  rec.check("trajectory", "unit", same_segments(ops.concat_tr(Tr{}, a), a) && same_segments(ops.concat_tr(a, Tr{}), a),
            [] { return std::string("epsilon is not a unit of concatenation"); });
  const Tr left = ops.concat_tr(ops.concat_tr(a, b), c);
  const Tr right = ops.concat_tr(a, ops.concat_tr(b, c));
  rec.check("trajectory", "associativity", left.total() == right.total() && probe_equal(left, right, seed),
            [] { return std::string("(a b) c differs from a (b c)"); });
  const Tr ab = ops.concat_tr(a, b);
  rec.check("trajectory", "duration-additivity", std::abs(ab.total() - (a.total() + b.total())) <= 1e-12, [&] {
    return "total " + format_number(ab.total()) + " != " + format_number(a.total() + b.total());
  });
  const Tr abc = ops.concat_tr(ab, c);
  const ProbeSet pa = make_probes(a, abc, a.total(), seed);
  const ProbeSet pab = make_probes(ab, abc, ab.total(), seed);
  rec.check("trajectory", "prefix-preorder",
            prefix_le(a, a, pa) && prefix_le(a, ab, pa) && prefix_le(ab, abc, pab) && prefix_le(a, abc, pa) &&
                prefix_le(Tr{}, a, {}),
            [] { return std::string("prefix order is not a preorder on concatenations"); });
  const double d = 0.25 * r.integer(0, static_cast<int>(abc.total() / 0.25));
  const Tr cut = abc.truncate(d);
  bool ok = cut.total() == d && abc.truncate(abc.total()).total() == abc.total() && abc.truncate(0).empty();
  for (double t : make_probes(cut, abc, d, seed)) ok = ok && close_states(cut.at(t), abc.at(t));
  rec.check("trajectory", "truncate", ok, [] { return std::string("truncate changes values"); });
}

void monad_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const RandFn f = RandFn::make(r), g = RandFn::make(r);
  const H m = rand_elem(r);
  const Env x = r.state();
  auto u = [](const Env& s) -> H { return unit<Env>(s); };
  const std::uint64_t seed = r.seed();
  rec.check("monad", "left-unit", observably_equal(ops.kl(f, unit<Env>(x)), f(x), kInf, seed),
            [&] { return show(ops.kl(f, unit<Env>(x))) + " vs " + show(f(x)); });
  rec.check("monad", "right-unit", observably_equal(ops.kl(u, m), m, kInf, seed),
            [&] { return show(ops.kl(u, m)) + " vs " + show(m); });
  const H lhs = ops.kl(f, ops.kl(g, m));
  const H rhs = ops.kl([&](const Env& s) { return ops.kl(f, g(s)); }, m);
  rec.check("monad", "associativity", observably_equal(lhs, rhs, kInf, seed),
            [&] { return show(lhs) + " vs " + show(rhs); });
}

void module_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const Tr m = rand_traj(r), n = rand_traj(r);
  const H e = rand_elem(r);
  const std::uint64_t seed = r.seed();
  rec.check("module", "action-unit", observably_equal(ops.act(Tr{}, e), e, kInf, seed),
            [&] { return show(ops.act(Tr{}, e)) + " vs " + show(e); });
  const H lhs = ops.act(concat(m, n), e);
  const H rhs = ops.act(m, ops.act(n, e));
  rec.check("module", "action-compatibility", observably_equal(lhs, rhs, kInf, seed),
            [&] { return show(lhs) + " vs " + show(rhs); });
}

void iota_suite(Rand& r, const Ops& ops, Recorder& rec) {
  using I = Either<Env, Either<Env, Bottom>>;
  const Env x = r.state();
  rec.check("iota", "unit", ops.io(unit<Env>(x)) == I::left(x), [] { return std::string("iota . eta != inl"); });
  const RandFn f = RandFn::make(r);
  const H m = rand_elem(r);
  const I lhs = ops.io(kleisli(f, m));
  const I im = ops.io(m);
  const I rhs = im.is_left() ? ops.io(f(im.left_value())) : im;
  rec.check("iota", "kleisli", lhs == rhs, [&] { return "m = " + show(m); });
}

void tau_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const Env x = r.state();
  const std::uint64_t seed = r.seed();
  rec.check("tau", "unit", observably_equal(ops.ta(unit<SumState>(x)), unit<Env>(x), kInf, seed),
            [] { return std::string("tau . eta != eta"); });
  const RandSumFn f = RandSumFn::make(r);
  const HSum m = rand_sum_elem(r);
  const HSum bound = kleisli(f, m);
  const H lhs = ops.ta(bound);
  const H rhs = kleisli([&](const Env& s) { return ops.ta(f(s)); }, ops.ta(m));
  rec.check("tau", "kleisli", observably_equal(lhs, rhs, kInf, seed),
            [&] { return show(lhs) + " vs " + show(rhs); });

  const auto [prefix, whole] = detail::left_prefix(m.trajectory());
  if (m.trajectory().empty()) rec.branch("tau: empty trajectory");
  if (!whole) rec.branch("tau: right hit in m");
  if (m.divergent()) rec.branch("tau: divergent m");
  if (const auto* c = m.converged(); c && whole) {
    const auto [p2, whole2] = detail::left_prefix(f(c->value).trajectory());
    rec.branch(whole2 ? "tau: all left" : "tau: right hit in f(x)");
    if (f(c->value).divergent()) rec.branch("tau: divergent image");
  }
}

void joint_suite(Rand& r, const Ops& ops, Recorder& rec) {
  using I = Either<Env, Either<Env, Bottom>>;
  const HSum m = rand_sum_elem(r);
  const I lhs = iota(ops.ta(m));
  const auto im = iota(m);
  I rhs = I::right(Either<Env, Bottom>::right(Bottom{}));
  if (im.is_left()) {
    rhs = I::left(im.left_value());
  } else if (im.right_value().is_left() && im.right_value().left_value().is_left()) {
    rhs = I::right(Either<Env, Bottom>::left(im.right_value().left_value().left_value()));
  }
  rec.check("joint", "iota-after-tau", lhs == rhs, [] { return std::string("iota . tau mismatch"); });

  const RandStateMap f = RandStateMap::make(r);
  auto copair = [f](const SumState& e) { return e.is_left() ? f(e.left_value()) : e; };
  const std::uint64_t seed = r.seed();
  const H l9 = ops.ta(map_states(m, copair));
  const H r9 = ops.ta(map_states(ops.ta(m), f));
  rec.check("joint", "tau-after-map", observably_equal(l9, r9, kInf, seed), [&] { return show(l9) + " vs " + show(r9); });
}

HClassic<Env> rand_classic(Rand& r) {
  Tr tr = rand_traj(r);
  const double k = r.unit();
  if (k < 0.5) return HClassic<Env>{true, tr, r.state(), DivCause::semantic};
  if (k < 0.75) return HClassic<Env>{false, tr, std::nullopt, DivCause::semantic};
  return HClassic<Env>{false, tr, r.state(), DivCause::semantic};
}

void theta_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const std::uint64_t seed = r.seed();
  const H m = rand_elem(r);
  rec.check("theta", "round-trip", observably_equal(ops.th_inv(theta(m)), m, kInf, seed),
            [&] { return show(ops.th_inv(theta(m))) + " vs " + show(m); });
  const HClassic<Env> h = rand_classic(r);
  rec.check("theta", "inverse-round-trip", observably_equal(theta(ops.th_inv(h)), h, seed),
            [] { return std::string("theta . theta_inv != id"); });
  const Env x = r.state();
  const HClassic<Env> eta = theta(unit<Env>(x));
  rec.check("theta", "unit", eta.convergent && eta.tr.empty() && eta.endpoint && *eta.endpoint == x,
            [] { return std::string("theta . eta is not inl <[0,0], x>"); });

  const RandFn f = RandFn::make(r);
  auto tf = [&](const Env& s) { return theta(ops.th_inv(theta(f(s)))); };
  const HClassic<Env> lhs = theta(state_kleisli([&](const Env& s) { return ops.th_inv(theta(f(s))); }, ops.th_inv(theta(m))));
  const HClassic<Env> rhs = classic_kleisli(tf, theta(m));
  rec.check("theta", "kleisli-transport", observably_equal(lhs, rhs, seed), [&] { return "m = " + show(m); });

  bool cut = false;
  for (const auto& seg : m.trajectory().segments()) cut = cut || theta(f(seg.law->at(0.0))).instant_divergence();
  const HClassic<Env> tm = theta(m);
  if (tm.endpoint) cut = cut || theta(f(*tm.endpoint)).instant_divergence();
  rec.branch(cut ? "theta: I' != I" : "theta: I' = I");
}

void elgot_suite(Rand& r, const Ops& ops, Recorder& rec) {
  const RandLoop f = RandLoop::make(r);
  const Env x = r.state();
  const double h = r.unit() < 0.3 ? kInf : 0.25 * r.integer(0, 24);
  const std::uint64_t seed = r.seed();
  constexpr std::uint64_t fuel = 2000;

  FuelMeter m1(fuel), m2(fuel);
  const H lhs = ops.iterate(f, x, Demand{h, &m1});
  auto step = [&](const Either<Env, Env>& e, const Demand& d) -> H {
    if (e.is_left()) return unit<Env>(e.left_value());
    return ops.iterate(f, e.right_value(), d);
  };
  // the outer application of f draws one unit, as the first unfolding on the left does
  m2.consume();
  const H rhs = bind(f(x), step, Demand{h, &m2});
  bool ok;
  if (fuel_approximation(lhs) || fuel_approximation(rhs)) {
    ok = fuel_approximation(lhs) && fuel_approximation(rhs) && probe_equal(lhs.trajectory(), rhs.trajectory(), seed);
  } else {
    ok = observably_equal(lhs, rhs, h, seed);
  }
  rec.check("elgot", "fixpoint", ok, [&] { return show(lhs) + " vs " + show(rhs) + " at horizon " + format_number(h); });

  const double h1 = 0.25 * r.integer(0, 16);
  const double h2 = h1 + 0.25 * r.integer(0, 16);
  FuelMeter n1(fuel), n2(fuel);
  const H a = ops.iterate(f, x, Demand{h1, &n1});
  const H b = ops.iterate(f, x, Demand{h2, &n2});
  rec.check("elgot", "omega-chain", prefix_le(a.trajectory(), b.trajectory(), make_probes(a.trajectory(), b.trajectory(), a.trajectory().total(), seed)),
            [&] { return show(a) + " not below " + show(b); });
}

}  // namespace

bool LawReport::all_passed() const {
  for (const auto& l : laws)
    if (l.failed != 0) return false;
  return true;
}

std::uint64_t LawReport::failures(const std::string& suite) const {
  std::uint64_t n = 0;
  for (const auto& l : laws)
    if (l.suite == suite) n += l.failed;
  return n;
}

std::string mutation_suite(Mutation m) {
  switch (m) {
    case Mutation::concat_drops_segment: return "trajectory";
    case Mutation::kleisli_drops_prefix: return "monad";
    case Mutation::action_wrong_side: return "module";
    case Mutation::iota_last_point: return "iota";
    case Mutation::tau_keeps_converged: return "tau";
    case Mutation::tau_filters_right: return "joint";
    case Mutation::theta_drops_endpoint: return "theta";
    case Mutation::elgot_drops_prefix: return "elgot";
    default: return "";
  }
}

std::string mutation_name(Mutation m) {
  switch (m) {
    case Mutation::concat_drops_segment: return "concat drops a segment";
    case Mutation::kleisli_drops_prefix: return "kleisli drops the prefix";
    case Mutation::action_wrong_side: return "action on the wrong side";
    case Mutation::iota_last_point: return "iota returns the last point";
    case Mutation::tau_keeps_converged: return "tau keeps convergence after a cut";
    case Mutation::tau_filters_right: return "tau filters right points";
    case Mutation::theta_drops_endpoint: return "theta_inv drops the endpoint";
    case Mutation::elgot_drops_prefix: return "elgot drops the accumulated prefix";
    default: return "none";
  }
}

LawReport run_law_suites(std::uint64_t seed, std::uint64_t cases, Mutation mutation) {
  LawReport report;
  Recorder rec(report);
  const Ops ops{mutation};
  Rand r(seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    trajectory_suite(r, ops, rec);
    monad_suite(r, ops, rec);
    module_suite(r, ops, rec);
    iota_suite(r, ops, rec);
    tau_suite(r, ops, rec);
    joint_suite(r, ops, rec);
    theta_suite(r, ops, rec);
    elgot_suite(r, ops, rec);
  }
  rec.finish();
  return report;
}

}  // namespace hyb
