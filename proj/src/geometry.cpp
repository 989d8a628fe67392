#include "flatspot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flatspot/errors.hpp"

namespace flatspot {

namespace {

// The open arcs meet.
bool interiors_meet(const Arc& a, const Arc& b) {
  BigReal d1 = ccw_length(a.start, b.start);
  BigReal d2 = ccw_length(b.start, a.start);
  if (d1.is_zero()) return !a.length.is_zero() && !b.length.is_zero();
  return d1 < a.length || (d2 < b.length && !d2.is_zero());
}

BigReal thirds_cross_ratio(const BigReal& lo, const BigReal& hi) {
  BigReal third = (hi - lo) / 3L;
  return cross_ratio(Quadruple{lo, lo + third, hi - third, hi});
}

}  // namespace

const char* to_string(Hole::Kind kind) noexcept {
  return kind == Hole::Kind::box ? "box" : "circ";
}

// ---------------------------------------------------------------- partitions

BigReal Partition::preimage_total() const {
  BigReal sum(preimages.empty() ? kDefaultPrecision : preimages.front().length.precision());
  for (const auto& a : preimages) sum += a.length;
  return sum;
}

BigReal Partition::hole_total() const {
  BigReal sum(preimages.empty() ? kDefaultPrecision : preimages.front().length.precision());
  for (const auto& h : boxes) sum += h.arc.length;
  for (const auto& h : circs) sum += h.arc.length;
  return sum;
}

long double Partition::error_bound() const {
  long double e = 0.0L;
  for (auto x : preimage_errors) e += 2.0L * x;
  return e;
}

std::vector<const Hole*> Partition::holes() const {
  std::vector<const Hole*> out;
  for (const auto& h : boxes) out.push_back(&h);
  for (const auto& h : circs) out.push_back(&h);
  const BigReal r = preimages.front().end();
  std::sort(out.begin(), out.end(), [&](const Hole* x, const Hole* y) {
    return ccw_length(r, x->arc.start) < ccw_length(r, y->arc.start);
  });
  return out;
}

Partition build_partition(const FlatSpotMap& map, const ContinuedFraction& cf, int n) {
  if (n < 2 || n + 1 > cf.max_level()) {
    fail(ErrorKind::undefined_at_level, "partition needs levels n and n + 1 with n >= 2, got " +
                                            std::to_string(n));
  }
  if (map.b().is_zero()) fail(ErrorKind::config, "partition of a map without a flat spot");
  Partition p;
  p.n = n;
  p.q = cf.level_q(n);
  p.q_next = cf.level_q(n + 1);
  if (p.q_next <= p.q) fail(ErrorKind::undefined_at_level, "partition needs q_{n+1} > q_n");
  const std::int64_t count = p.q + p.q_next;

  BackwardOrbit back = backward_orbit(map, count - 1);
  for (std::int64_t i = 0; i < count; ++i) {
    p.preimages.push_back(Arc{back.left[i], back.length(i)});
    p.preimage_errors.push_back(back.errors[i]);
  }

  std::vector<std::int64_t> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t x, std::int64_t y) {
    return ccw_length(p.preimages[0].start, p.preimages[x].start) <
           ccw_length(p.preimages[0].start, p.preimages[y].start);
  });

  const std::int64_t left_of_u = order.back();
  const std::int64_t right_of_u = order.size() > 1 ? order[1] : 0;
  if (left_of_u == p.q) {
    p.side = -1;
  } else if (right_of_u == p.q) {
    p.side = 1;
  } else {
    fail(ErrorKind::side_case_undetermined,
         "-q_n is not adjacent to U at level " + std::to_string(n));
  }

  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::int64_t L = order[k];
    const std::int64_t R = order[(k + 1) % order.size()];
    const Arc& a = p.preimages[L];
    const Arc& b = p.preimages[R];
    Hole h;
    h.left_preimage = L;
    h.right_preimage = R;
    h.error = p.preimage_errors[L] + p.preimage_errors[R];
    BigReal gap = ccw_length(a.end(), b.start);
    BigReal span = ccw_length(a.start, b.start);
    // Overlapping arcs show up as a gap wrapping almost all the way round.
    if (!(span > a.length) || gap.to_long_double() <= h.error) {
      const bool at_u = (L == 0 || R == 0) && (L == p.q || R == p.q);
      fail(at_u ? ErrorKind::side_case_undetermined : ErrorKind::precision_exhausted,
           "preimages -" + std::to_string(L) + " and -" + std::to_string(R) +
               " are not separated within the error bound");
    }
    h.arc = Arc{a.end(), gap};
    const std::int64_t box_index = p.side < 0 ? R : L;
    const std::int64_t circ_index = p.side < 0 ? L : R;
    const std::int64_t box_diff = p.side < 0 ? L - R : R - L;
    const std::int64_t circ_diff = p.side < 0 ? R - L : L - R;
    if (box_diff == p.q && box_index < p.q_next) {
      h.kind = Hole::Kind::box;
      h.index = box_index;
      p.boxes.push_back(std::move(h));
    } else if (circ_diff == p.q_next && circ_index < p.q) {
      h.kind = Hole::Kind::circ;
      h.index = circ_index;
      p.circs.push_back(std::move(h));
    } else {
      fail(ErrorKind::precision_exhausted, "hole between -" + std::to_string(L) + " and -" +
                                               std::to_string(R) + " fits neither label");
    }
  }
  auto by_index = [](const Hole& x, const Hole& y) { return x.index < y.index; };
  std::sort(p.boxes.begin(), p.boxes.end(), by_index);
  std::sort(p.circs.begin(), p.circs.end(), by_index);
  if (static_cast<std::int64_t>(p.boxes.size()) != p.q_next ||
      static_cast<std::int64_t>(p.circs.size()) != p.q) {
    fail(ErrorKind::precision_exhausted, "hole labels incomplete at level " + std::to_string(n));
  }
  return p;
}

// ---------------------------------------------------------------- measure and dimension

DeficitReport lebesgue_deficit(const std::vector<Partition>& partitions) {
  DeficitReport out;
  std::vector<double> xs, ys;
  for (const auto& p : partitions) {
    out.levels.push_back(p.n);
    out.totals.push_back(p.hole_total());
    xs.push_back(p.n);
    ys.push_back(log(out.totals.back()).to_double());
  }
  for (std::size_t k = 0; k + 1 < out.totals.size(); ++k) {
    out.ratios.push_back((out.totals[k + 1] / out.totals[k]).to_double());
  }
  if (xs.size() >= 3) {
    out.fit = fit_line(xs, ys);
    out.rate = std::exp(out.fit.slope);
  }
  return out;
}

BigReal hausdorff_sum(const Partition& partition, double alpha) {
  const Precision bits = partition.preimages.front().length.precision();
  BigReal a(alpha, bits);
  BigReal sum(bits);
  auto add = [&](const Hole& h) {
    sum += alpha == 1.0 ? h.arc.length : pow(h.arc.length, a);
  };
  for (const auto& h : partition.boxes) add(h);
  for (const auto& h : partition.circs) add(h);
  return sum;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(0.5 + 0.05 * k);
  return grid;
}

HausdorffReport hausdorff_scan(const std::vector<Partition>& partitions,
                               std::vector<double> alphas, bool refine) {
  if (partitions.size() < 2) fail(ErrorKind::config, "Hausdorff scan needs two or more levels");
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  HausdorffReport out;
  for (const auto& p : partitions) out.levels.push_back(p.n);

  auto monotone = [&](double alpha) {
    BigReal prev = hausdorff_sum(partitions.front(), alpha);
    for (std::size_t k = 1; k < partitions.size(); ++k) {
      BigReal next = hausdorff_sum(partitions[k], alpha);
      if (next > prev) return false;
      prev = std::move(next);
    }
    return true;
  };

  std::optional<std::size_t> first;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (monotone(alphas[k])) {
      first = k;
      break;
    }
  }
  if (first && refine && *first > 0) {
    const double lo = alphas[*first - 1];
    const double hi = alphas[*first];
    for (double a = lo + 0.005; a < hi - 1e-9; a += 0.005) alphas.push_back(std::round(a * 1000) / 1000);
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  }
  // A monotone window at alpha stays monotone above it (holes are shorter
  // than 1), but each grid point is checked anyway.
  for (double a : alphas) {
    if (a < 1.0 && monotone(a)) {
      out.alpha_star = a;
      break;
    }
  }
  out.alphas = alphas;
  for (const auto& p : partitions) {
    std::vector<BigReal> row;
    for (double a : alphas) row.push_back(hausdorff_sum(p, a));
    out.sums.push_back(std::move(row));
  }
  out.verdict = out.alpha_star ? "bounded" : "inconclusive";
  return out;
}

HausdorffReport hausdorff_upper(const std::vector<Partition>& partitions,
                                std::vector<double> alphas, bool refine) {
  HausdorffReport out = hausdorff_scan(partitions, std::move(alphas), refine);
  if (!out.alpha_star) {
    fail(ErrorKind::inconclusive_window, "no grid alpha below 1 gives decreasing sums");
  }
  return out;
}

// ---------------------------------------------------------------- cross-ratios

BigReal cross_ratio(const Quadruple& q) {
  BigReal ab = ccw_length(q.a, q.b);
  BigReal bc = ccw_length(q.b, q.c);
  BigReal cd = ccw_length(q.c, q.d);
  if (ab.is_zero() || bc.is_zero() || cd.is_zero() || !(ab + bc + cd < 1.0)) {
    fail(ErrorKind::degenerate_quadruple, "points are not in strict circular order");
  }
  return ab * cd / ((ab + bc) * (bc + cd));
}

DcrResult dcr_product(const FlatSpotMap& map, const Quadruple& q, int iters) {
  if (iters < 0) fail(ErrorKind::config, "negative iteration count");
  DcrResult out;
  out.product = BigReal(1.0, map.precision());
  const Arc u = map.flat_spot();
  Quadruple cur = q;
  BigReal cr = cross_ratio(cur);
  std::vector<Arc> spans;
  for (int i = 0; i < iters; ++i) {
    if (interiors_meet(make_arc(cur.b, cur.c), u)) {
      fail(ErrorKind::flat_spot_hit, "arc (b, c) meets U at iterate " + std::to_string(i));
    }
    spans.push_back(make_arc(cur.a, cur.d));
    Quadruple next{frac(map.eval(cur.a)), frac(map.eval(cur.b)), frac(map.eval(cur.c)),
                   frac(map.eval(cur.d))};
    BigReal next_cr = cross_ratio(next);
    out.factors.push_back(next_cr / cr);
    out.product *= out.factors.back();
    cur = std::move(next);
    cr = std::move(next_cr);
  }

  // Sweep over the arcs cut at 0; ends sort before starts at equal positions.
  std::vector<std::pair<BigReal, int>> events;
  for (const auto& s : spans) {
    BigReal end = s.start + s.length;
    if (end > 1.0) {
      events.emplace_back(s.start, +1);
      events.emplace_back(BigReal(1.0, end.precision()), -1);
      events.emplace_back(BigReal(0.0, end.precision()), +1);
      events.emplace_back(end - 1L, -1);
    } else {
      events.emplace_back(s.start, +1);
      events.emplace_back(end, -1);
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) {
    if (x.first < y.first) return true;
    if (y.first < x.first) return false;
    return x.second < y.second;
  });
  int depth = 0;
  for (const auto& e : events) {
    depth += e.second;
    out.multiplicity = std::max(out.multiplicity, depth);
  }
  return out;
}

PowerLawQuotient power_law_quotient(const BigReal& a, const BigReal& b, const BigReal& z,
                                    const BigReal& nu) {
  if (!(a > 0.0) || !(a < b) || !(b < z)) fail(ErrorKind::ordering_violation, "need 0 < a < b < z");
  if (nu < 1.0) fail(ErrorKind::config, "power_law_quotient needs nu >= 1");
  BigReal an = pow(a, nu), bn = pow(b, nu), zn = pow(z, nu);
  PowerLawQuotient out;
  out.r = (bn - an) / (b - a) * (z - b) / (zn - bn);
  out.limit = (bn - an) / ((b - a) * nu * pow(b, nu - 1L));
  return out;
}

// ---------------------------------------------------------------- chains

IntervalChain build_chain(const FlatSpotMap& map, const Arc& first, int steps) {
  if (steps < 0) fail(ErrorKind::config, "negative chain length");
  IntervalChain chain;
  chain.intervals.push_back(first);
  const Arc u = map.flat_spot();
  for (int j = 0; j < steps; ++j) {
    const Arc& cur = chain.intervals.back();
    if (interiors_meet(cur, u)) {
      fail(ErrorKind::chain_invalid, "I_" + std::to_string(j) + " meets U");
    }
    BigReal lo = map.preimage(cur.start);
    BigReal hi = map.preimage(cur.start + cur.length);
    chain.intervals.push_back(Arc{frac(lo), hi - lo});
  }
  if (steps > 0 && interiors_meet(chain.intervals.back(), u)) {
    fail(ErrorKind::chain_invalid, "I_" + std::to_string(steps) + " meets U");
  }
  return chain;
}

ChainNonlinearity rescaled_nonlinearity(const FlatSpotMap& map, const IntervalChain& chain,
                                        int samples) {
  if (chain.intervals.empty()) fail(ErrorKind::chain_invalid, "empty chain");
  if (samples < 2) fail(ErrorKind::config, "need at least two samples");
  const Arc u = map.flat_spot();
  const int n = chain.steps();
  const Precision bits = map.precision();
  ChainNonlinearity out;
  out.samples = samples;
  out.total_length = BigReal(bits);
  for (int j = 0; j <= n; ++j) {
    const Arc& I = chain.intervals[j];
    if (j > 0 && interiors_meet(I, u)) fail(ErrorKind::chain_invalid, "I_" + std::to_string(j) + " meets U");
    if (j > 0) {
      BigReal expected = frac(map.eval(I.start));
      const Arc& prev = chain.intervals[j - 1];
      if (arc_distance(expected, prev.start) > BigReal::power_of_two(-static_cast<long>(bits) / 2, bits)) {
        fail(ErrorKind::chain_invalid, "I_" + std::to_string(j) + " is not a preimage of I_" +
                                           std::to_string(j - 1));
      }
    }
    out.total_length += I.length;
  }

  const Arc& first = chain.intervals.front();
  out.sup = BigReal(bits);
  for (int s = 0; s < samples; ++s) {
    BigReal y = first.start + first.length * BigReal(static_cast<double>(s) / (samples - 1), bits);
    BigReal total(bits);
    BigReal d(1.0, bits);  // derivative of F^{-k} at the sample
    for (int k = 1; k <= n; ++k) {
      BigReal x = map.preimage(y);
      BigReal df = map.deriv(x);
      total -= map.nonlinearity(x) / df * d;
      d /= df;
      y = std::move(x);
    }
    BigReal scaled = abs(total * first.length);
    if (scaled > out.sup) out.sup = std::move(scaled);
  }

  const Arc& last = chain.intervals.back();
  BigReal lo = last.start;
  BigReal hi = last.start + last.length;
  BigReal third = (hi - lo) / 3L;
  Quadruple q{lo, lo + third, hi - third, hi};
  Quadruple image = q;
  for (int k = 0; k < n; ++k) {
    image = Quadruple{map.eval(image.a), map.eval(image.b), map.eval(image.c), map.eval(image.d)};
  }
  out.distortion = cross_ratio(Quadruple{frac(image.a), frac(image.b), frac(image.c), frac(image.d)}) /
                   thirds_cross_ratio(lo, hi);
  return out;
}

}  // namespace flatspot
