#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lathop/diagnostics.hpp"
#include "lathop/identities.hpp"
#include "lathop/model2.hpp"
#include "lathop/rates.hpp"
#include "lathop/stats.hpp"

using namespace lathop;

namespace {

Model2State<double> fresh_state(const NestedChain<double>& chain, double s1, double s2,
                                std::uint64_t seed, TrialOptions opt = {}) {
  RandomStream rng = derive_stream(seed, 0);
  return make_model2_state(chain, s1, s2, opt, rng);
}

}  // namespace

TEST_CASE("shifted codeword lives on the quant codebook and collapses at s=0") {
  const NestedChain<double> chain(4, 2, 2, 1.0);
  RandomStream rng = derive_stream(51, 0);
  const int big_k = chain.radix(Codebook::quant);

  auto st = fresh_state(chain, 255.0, 255.0, 52);
  st.uq.setZero();
  const ArrayXd s0 = ArrayXd::Zero(4);
  const Digits collapsed = m2_shifted_codeword(st, s0);
  CHECK((codebook_point(chain, Codebook::quant, collapsed) == st.t).all());

  // arbitrary interference: still a valid quant coset; with u1 = 0 the
  // transmitted point is the shifted codeword itself
  for (int i = 0; i < 200; ++i) {
    auto state = make_model2_state(chain, 255.0, 255.0, {}, rng);
    const InterferenceSpec spec{InterferenceKind::gaussian, 1e8, true};
    const ArrayXd s = gen_interference<double>(spec, 4, rng);
    const Digits shifted = m2_shifted_codeword(state, s);
    CHECK((shifted >= 0).all());
    CHECK((shifted < big_k).all());
    state.u1.setZero();
    const ArrayXd x1 = m2_encode_source(state, s);
    CHECK((x1 == codebook_point(chain, Codebook::quant, shifted)).all());
    CHECK(contains(chain.quant(), x1));
  }
}

TEST_CASE("pre-cancelled transmission is uniform on the coarse cell") {
  const NestedChain<double> chain(2, 2, 2, 1.0);
  RandomStream rng = derive_stream(53, 0);
  const double a = chain.coarse().scale();
  const ArrayXd s = ArrayXd::Constant(2, 777.7);
  std::vector<double> comp;
  auto st = fresh_state(chain, 255.0, 255.0, 54);
  for (int i = 0; i < 20000; ++i) {
    st.u1 = sample_dither(chain.coarse(), rng);
    comp.push_back(m2_encode_source(st, s)[0]);
  }
  CHECK(ks_uniform_pass(comp, -a / 2, a / 2, 0.01));
}

TEST_CASE("relay decodes the shifted codeword exactly in the clean limit") {
  const NestedChain<double> chain(4, 2, 2, 1.0);
  TrialOptions opt;
  opt.alpha1 = 1.0;
  RandomStream rng = derive_stream(55, 0);
  const InterferenceSpec spec{InterferenceKind::uniform, 1e6, true};
  for (int i = 0; i < 500; ++i) {
    const auto st = make_model2_state(chain, 255.0, 255.0, opt, rng);
    const ArrayXd s = gen_interference<double>(spec, 4, rng);
    const ArrayXd x1 = m2_encode_source(st, s);
    CHECK((m2_relay_decode(st, x1) == m2_shifted_codeword(st, s)).all());
  }
}

TEST_CASE("relay derivation chain holds numerically") {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  RandomStream rng = derive_stream(56, 0);
  for (int i = 0; i < 300; ++i) {
    const InterferenceSpec spec{InterferenceKind::gaussian, 1e12, true};
    const ArrayXd s = gen_interference<double>(spec, 8, rng);
    const double alpha1 = rng.uniform(0.3, 1.0);
    const bool noisy = i % 2 == 0;
    CHECK(m2_relay_identity_residual(chain, 15.0, 255.0, alpha1, s, noisy, rng) <=
          identity_tolerance(s));
  }
}

TEST_CASE("noisy relay decode at S1 = 255, Rq = 2, n = 8 stays under 5%") {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  const ChannelParams<double> cp{255.0, 255.0, false};
  const InterferenceSpec spec{InterferenceKind::constant, 1e6, true};
  int errors = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng = derive_stream(57, trial);
    const auto st = make_model2_state(chain, cp.s1, cp.s2, {}, rng);
    const ArrayXd s = gen_interference<double>(spec, 8, rng);
    const ArrayXd x1 = m2_encode_source(st, s);
    const ArrayXd y2 = hop1(Model::m2, x1, s, cp, rng);
    errors += (m2_relay_decode(st, y2) != m2_shifted_codeword(st, s)).any();
  }
  CHECK(double(errors) / trials < 0.05);
}

TEST_CASE("re-encode and full clean chain reproduce the message") {
  const NestedChain<double> chain(4, 2, 2, 1.0);
  auto st = fresh_state(chain, 255.0, 255.0, 58);
  RandomStream rng = derive_stream(58, 1);
  Digits t_hat(4);
  for (int i = 0; i < 4; ++i) {
    t_hat[i] = static_cast<int>(rng.uniform_int(chain.radix(Codebook::quant)));
  }
  st.u2.setZero();
  CHECK((m2_relay_reencode(chain, t_hat, st.u2) ==
         codebook_point(chain, Codebook::quant, t_hat)).all());

  // dithered relay output is uniform on the coarse cell
  const double a = chain.coarse().scale();
  std::vector<double> comp;
  for (int i = 0; i < 20000; ++i) {
    const ArrayXd u2 = sample_dither(chain.coarse(), rng);
    comp.push_back(m2_relay_reencode(chain, t_hat, u2)[0]);
  }
  CHECK(ks_uniform_pass(comp, -a / 2, a / 2, 0.01));

  const ChannelParams<double> cp{255.0, 255.0, true};
  TrialOptions opt;
  opt.alpha1 = 1.0;
  opt.alpha2 = 1.0;
  for (const InterferenceSpec spec :
       {InterferenceSpec{InterferenceKind::constant, 0.0, true},
        InterferenceSpec{InterferenceKind::constant, 1e9, true},
        InterferenceSpec{InterferenceKind::sinusoid, 1e4, true},
        InterferenceSpec{InterferenceKind::uniform, 1e5, true}}) {
    for (int trial = 0; trial < 250; ++trial) {
      RandomStream trng = derive_stream(59, trial);
      const TrialOutcome out = run_model2_trial(chain, cp, spec, opt, trng);
      CHECK(!out.message_error);
      CHECK(!out.relay_error);
    }
  }
}

TEST_CASE("destination derivation chain and exact special case") {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  RandomStream rng = derive_stream(60, 0);
  for (int i = 0; i < 300; ++i) {
    const InterferenceSpec spec{InterferenceKind::gaussian, 1e6, true};
    const ArrayXd s = gen_interference<double>(spec, 8, rng);
    const double alpha2 = rng.uniform(0.3, 1.0);
    CHECK(m2_destination_identity_residual(chain, 255.0, 15.0, alpha2, s, i % 2 == 0, rng) <=
          identity_tolerance(s));
  }

  // s = 0, uq = 0, noiseless: decoding is exact
  const NestedChain<double> small(4, 2, 2, 1.0);
  TrialOptions opt;
  opt.alpha1 = 1.0;
  opt.alpha2 = 1.0;
  auto st = fresh_state(small, 255.0, 255.0, 61, opt);
  st.uq.setZero();
  const ArrayXd s0 = ArrayXd::Zero(4);
  const ArrayXd x2 = m2_relay_reencode(small, m2_shifted_codeword(st, s0), st.u2);
  CHECK((m2_destination_decode(st, (x2 + s0).eval()) == st.w).all());
}

TEST_CASE("interference residual variance equals the quant second moment") {
  const NestedChain<double> chain(1, 2, 2, 1.0);
  RandomStream rng = derive_stream(62, 0);
  const double alpha2 = 255.0 / 256.0;
  const ArrayXd s = ArrayXd::Constant(1, 777.25);
  double sum_sq = 0.0;
  const int n_samples = 100000;
  for (int i = 0; i < n_samples; ++i) {
    const ArrayXd uq = sample_dither(chain.quant(), rng);
    sum_sq += mod_lattice(chain.quant(), (alpha2 * s + uq).eval()).square().mean();
  }
  CHECK(sum_sq / n_samples ==
        doctest::Approx(chain.quant_second_moment()).epsilon(0.05));
}

TEST_CASE("noisy end-to-end at 24 dB stays under the coarse 5% bound") {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  const ChannelParams<double> cp{255.0, 255.0, false};
  const InterferenceSpec spec{InterferenceKind::gaussian, 1e10, true};
  int errors = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng = derive_stream(63, trial);
    errors += run_model2_trial(chain, cp, spec, {}, rng).message_error;
  }
  CHECK(double(errors) / trials < 0.05);
}

TEST_CASE("relay message bound is looser than the destination bound") {
  const double snrs[] = {3.0, 15.0, 255.0, 4095.0};
  for (double s1 : snrs) {
    for (double s2 : snrs) {
      CHECK(0.5 * std::log2(1.0 + s1) >= achievable_rate(s1, s2) - 1e-12);
      const auto cfg = plan_parameters(Model::m2, s1, s2, 0.0, 4);
      if (cfg) {
        CHECK(cfg->margins.relay_rate_slack >= cfg->margins.rate_slack - 1e-12);
      }
    }
  }
}

TEST_CASE("empirical MMSE minimizer sits at snr/(snr+1) (smoke)") {
  const NestedChain<double> chain(8, 2, 2, 1.0);
  const double snr = 15.0;
  ArrayXd alphas(101);
  for (int i = 0; i <= 100; ++i) alphas[i] = i / 100.0;
  const ArrayXd profile = mmse_variance_profile(chain, snr, alphas, 2000, 64);
  Eigen::Index argmin = 0;
  profile.minCoeff(&argmin);
  CHECK(std::abs(alphas[argmin] - snr / (snr + 1.0)) <= 0.01 + 1e-9);
}
