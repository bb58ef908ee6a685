#include "lathop/verify.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lathop/identities.hpp"
#include "lathop/lattice.hpp"
#include "lathop/model1.hpp"
#include "lathop/model2.hpp"
#include "lathop/rates.hpp"
#include "lathop/rng.hpp"
#include "lathop/stats.hpp"

namespace lathop {

namespace {

std::string ratio_detail(const char* what, double value, double bound) {
  std::ostringstream out;
  out << what << " " << value << " (bound " << bound << ")";
  return out.str();
}

ArrayXd random_interference(RandomStream& rng, Eigen::Index n) {
  const double magnitude = std::pow(10.0, rng.uniform(0.0, 9.0));
  switch (rng.uniform_int(4)) {
    case 0: {
      InterferenceSpec spec{InterferenceKind::constant, magnitude, true};
      return gen_interference<double>(spec, n, rng);
    }
    case 1: {
      InterferenceSpec spec{InterferenceKind::gaussian, magnitude * magnitude, true};
      return gen_interference<double>(spec, n, rng);
    }
    case 2: {
      InterferenceSpec spec{InterferenceKind::sinusoid, magnitude, true};
      return gen_interference<double>(spec, n, rng);
    }
    default: {
      InterferenceSpec spec{InterferenceKind::uniform, magnitude, true};
      return gen_interference<double>(spec, n, rng);
    }
  }
}

NestedChain<double> random_chain(RandomStream& rng) {
  const Eigen::Index dims[] = {1, 2, 4, 8};
  const Eigen::Index n = dims[rng.uniform_int(4)];
  const int k1 = 2 + static_cast<int>(rng.uniform_int(3));
  const int k2 = 1 + static_cast<int>(rng.uniform_int(3));
  return NestedChain<double>(n, k1, k2, 1.0);
}

double random_alpha(RandomStream& rng, double snr) {
  switch (rng.uniform_int(3)) {
    case 0: return 1.0;
    case 1: return snr / (snr + 1.0);
    default: return rng.uniform(0.3, 1.0);
  }
}

}  // namespace

CheckResult check_mod_reconstruction(std::uint64_t seed) {
  RandomStream rng = derive_stream(seed, 1);
  double worst = 0.0;
  bool in_range = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_int(6));
    const double scale = std::exp(rng.uniform(-2.0, 3.0));
    const ScaledLattice<double> lat(n, scale);
    const ArrayXd x = uniform_array<double>(rng, n, -1e4 * scale, 1e4 * scale);
    const ArrayXd q = nearest_point(lat, x);
    const ArrayXd r = mod_lattice(lat, x);
    const double norm = std::max(1e-30, std::sqrt(x.square().sum()));
    worst = std::max(worst, std::sqrt((x - (q + r)).square().sum()) / norm);
    in_range = in_range && (r >= -scale / 2).all() && (r < scale / 2).all();
  }
  CheckResult res{"mod-reconstruction", worst <= 1e-9 && in_range,
                  ratio_detail("worst relative residual", worst, 1e-9)};
  if (!in_range) res.detail += "; output escaped the fundamental cell";
  return res;
}

CheckResult check_crypto_uniformity(std::uint64_t seed) {
  const Eigen::Index n = 4;
  const ScaledLattice<double> lat(n, std::sqrt(12.0));
  const double a = lat.scale();
  std::vector<ArrayXd> shifts;
  shifts.push_back(ArrayXd::Constant(n, 0.37 * a));
  {
    ArrayXd x(n);
    x << -0.81 * a, 2.5 * a, 0.05 * a, -17.3 * a;
    shifts.push_back(x);
  }
  shifts.push_back(ArrayXd::Constant(n, 1000.0 * a));

  RandomStream rng = derive_stream(seed, 2);
  const int samples = 100000;
  double worst_stat = 0.0;
  const double limit = ks_critical(0.01);
  for (const ArrayXd& x : shifts) {
    std::vector<std::vector<double>> per_comp(n);
    for (auto& v : per_comp) v.reserve(samples);
    for (int i = 0; i < samples; ++i) {
      const ArrayXd folded = mod_lattice(lat, (x + sample_dither(lat, rng)).eval());
      for (Eigen::Index c = 0; c < n; ++c) per_comp[c].push_back(folded[c]);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const double d = ks_statistic_uniform(per_comp[c], -a / 2, a / 2);
      worst_stat = std::max(worst_stat, std::sqrt(double(samples)) * d);
    }
  }
  return {"crypto-uniformity", worst_stat <= limit,
          ratio_detail("worst sqrt(N)*D", worst_stat, limit)};
}

CheckResult check_model1_identity(std::uint64_t seed) {
  RandomStream rng = derive_stream(seed, 3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const NestedChain<double> chain = random_chain(rng);
    const double s1 = std::exp(rng.uniform(0.0, 6.0));
    const ArrayXd s = random_interference(rng, chain.dim());
    const double alpha1 = random_alpha(rng, s1);
    const bool noisy = rng.uniform_int(2) == 1;
    const double residual =
        m1_relay_identity_residual(chain, s1, 255.0, alpha1, s, noisy, rng);
    worst = std::max(worst, residual / identity_tolerance(s));
  }
  return {"model1-identity-chain", worst <= 1.0,
          ratio_detail("worst residual / tolerance", worst, 1.0)};
}

CheckResult check_model2_identity(std::uint64_t seed) {
  RandomStream rng = derive_stream(seed, 4);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const NestedChain<double> chain = random_chain(rng);
    const double s1 = std::exp(rng.uniform(0.0, 6.0));
    const double s2 = std::exp(rng.uniform(0.0, 6.0));
    const ArrayXd s = random_interference(rng, chain.dim());
    const bool noisy = rng.uniform_int(2) == 1;
    const double relay =
        m2_relay_identity_residual(chain, s1, s2, random_alpha(rng, s1), s, noisy, rng);
    const double dest =
        m2_destination_identity_residual(chain, s1, s2, random_alpha(rng, s2), s, noisy, rng);
    worst = std::max(worst, std::max(relay, dest) / identity_tolerance(s));
  }
  return {"model2-identity-chain", worst <= 1.0,
          ratio_detail("worst residual / tolerance", worst, 1.0)};
}

CheckResult check_effective_noise(std::uint64_t seed, std::optional<double> alpha1_override) {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  const double s1 = 255.0;
  const double alpha_opt = s1 / (s1 + 1.0);
  TrialOptions opt;
  opt.alpha1 = alpha1_override ? *alpha1_override : alpha_opt;
  const ChannelParams<double> cp{s1, 255.0, false};
  const InterferenceSpec ispec{InterferenceKind::gaussian, 100.0, true};

  const int trials = 130000;  // >= 1e6 noise samples at n = 8
  double sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    RandomStream rng = derive_stream(seed, 0x10000 + static_cast<std::uint64_t>(i));
    const Model1State<double> st = make_model1_state(chain, cp.s1, cp.s2, opt, rng);
    const ArrayXd s = gen_interference<double>(ispec, chain.dim(), rng);
    const ArrayXd x1 = m1_encode_source(st);
    const ArrayXd y2 = hop1(Model::m1, x1, s, cp, rng);
    const ArrayXd y2p = m1_relay_scale(st, y2);
    const ArrayXd v = codebook_point(chain, Codebook::quant, m1_quantized_signal(st, s));
    sum_sq += mod_lattice(chain.coarse(), (y2p - v).eval()).square().sum();
  }
  const double measured = sum_sq / (double(trials) * double(chain.dim()));
  const double expected = (1.0 - alpha_opt) * (1.0 - alpha_opt) + alpha_opt * alpha_opt / s1 +
                          chain.quant_second_moment();
  const double rel = std::abs(measured / expected - 1.0);
  std::ostringstream detail;
  detail << "measured " << measured << " vs " << expected << " (rel err " << rel << ")";
  return {"effective-noise-decomposition", rel <= 0.10, detail.str()};
}

CheckResult check_gap_grid() {
  const int points = 50;
  const double lo = std::log10(0.1), hi = std::log10(1e4);
  double worst_gap = 0.0;
  double worst_form_diff = 0.0;
  double worst_diag = 0.0;
  for (int i = 0; i < points; ++i) {
    const double si = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
    for (int j = 0; j < points; ++j) {
      const double sj = std::pow(10.0, lo + (hi - lo) * j / (points - 1));
      worst_gap = std::max(worst_gap, rate_gap(si, sj));
      worst_form_diff =
          std::max(worst_form_diff, std::abs(achievable_rate(si, sj) - achievable_rate_expanded(si, sj)));
    }
    if (si > 1.0) worst_diag = std::max(worst_diag, std::abs(rate_gap(si, si) - 0.5));
  }
  const bool pass = worst_gap <= 0.5 + 1e-12 && worst_form_diff <= 1e-12 && worst_diag <= 1e-9;
  std::ostringstream detail;
  detail << "max gap " << worst_gap << ", max form diff " << worst_form_diff
         << ", max |diag gap - 1/2| " << worst_diag;
  return {"half-bit-gap-grid", pass, detail.str()};
}

CheckResult check_planner_soundness() {
  const double snrs[] = {0.5, 3.0, 15.0, 255.0, 4095.0};
  const double margins[] = {0.0, 0.25};
  bool pass = true;
  int planned_count = 0;
  std::ostringstream detail;
  for (Model model : {Model::m1, Model::m2}) {
    for (double s1 : snrs) {
      for (double s2 : snrs) {
        for (double margin : margins) {
          const auto cfg = plan_parameters(model, s1, s2, margin, 4);
          if (!cfg) continue;
          ++planned_count;
          const auto m = evaluate_constraints(model, s1, s2, cfg->k1, cfg->k2);
          if (!m.feasible(margin) || cfg->k2 < 2) pass = false;
          // maximality: k1 + 1 must be infeasible for every admissible k2
          for (int k2 = 1; k2 <= 4096; ++k2) {
            if (evaluate_constraints(model, s1, s2, cfg->k1 + 1, k2).feasible(margin)) {
              pass = false;
              detail << "k1+1 feasible at model " << int(model) << " s1=" << s1 << " s2=" << s2
                     << "; ";
            }
          }
        }
      }
    }
  }
  detail << planned_count << " planned configs revalidated";
  return {"planner-soundness", pass && planned_count > 0, detail.str()};
}

CheckResult check_list_cardinality(std::uint64_t seed) {
  RandomStream rng = derive_stream(seed, 5);
  struct Case {
    Eigen::Index n;
    int k2;
  };
  const Case cases[] = {{2, 2}, {3, 2}, {4, 3}};
  bool pass = true;
  for (const Case& c : cases) {
    const NestedChain<double> chain(c.n, 2, c.k2, 1.0);
    std::size_t expected = 1;
    for (Eigen::Index i = 0; i < c.n; ++i) expected *= static_cast<std::size_t>(c.k2);
    for (int trial = 0; trial < 100; ++trial) {
      const ArrayXd center =
          uniform_array<double>(rng, c.n, -5.0 * chain.coarse().scale(), 5.0 * chain.coarse().scale());
      const auto members = list_members(chain, region_index(chain, center));
      if (members.size() != expected) pass = false;
      for (std::size_t i = 0; pass && i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if ((members[i] == members[j]).all()) {
            pass = false;
            break;
          }
        }
      }
    }
  }
  return {"list-cardinality", pass, "k2^n members, all distinct, at 100 random centers per case"};
}

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_mod_reconstruction(options.seed));
  results.push_back(check_crypto_uniformity(options.seed));
  results.push_back(check_model1_identity(options.seed));
  results.push_back(check_model2_identity(options.seed));
  results.push_back(check_effective_noise(options.seed, options.alpha1_override));
  results.push_back(check_gap_grid());
  results.push_back(check_planner_soundness());
  results.push_back(check_list_cardinality(options.seed));
  return results;
}

}  // namespace lathop
