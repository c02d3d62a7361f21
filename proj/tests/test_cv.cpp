#include "helpers.hpp"
#include "qbench/cv.hpp"
#include "qbench/errors.hpp"
#include "qbench/quadrature.hpp"

using namespace qb;
using qbt::fro;

namespace {

double mean_photons(const Mat& rho) {
  double m = 0;
  for (int n = 0; n < rho.rows(); ++n) m += n * rho(n, n).real();
  return m;
}

Vec two_mode_ket(int n_max, int a, int r) {
  Vec v = Vec::Zero(n_max * n_max);
  v(a * n_max + r) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("quadrature rules integrate Gaussian moments") {
  const auto plane = gaussian_plane_rule(12, 2.0);
  double w = 0, m2 = 0, m4 = 0;
  for (const auto& n : plane) {
    w += n.w;
    m2 += n.w * std::norm(n.z);
    m4 += n.w * std::norm(n.z) * std::norm(n.z);
  }
  CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(0.5).epsilon(1e-13));  // E|z|^2 = 1/s
  CHECK(m4 == doctest::Approx(0.5).epsilon(1e-12));  // E|z|^4 = 2/s^2
  double p2 = 0;
  for (const auto& n : gaussian_polar_rule(8, 8, 2.0)) p2 += n.w * std::norm(n.z);
  CHECK(p2 == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("coherent states") {
  const PureState vac = coherent_state(0.0, FockCutoff{});
  CHECK(std::abs(vac.amp()(0)) == doctest::Approx(1.0));
  const PureState a = coherent_state(cplx(1.0, 0.5), FockCutoff{});
  double mean = 0;
  for (int n = 0; n < 40; ++n) mean += n * std::norm(a.amp()(n));
  CHECK(mean == doctest::Approx(1.25).epsilon(1e-9));
  try {
    coherent_state(5.0, FockCutoff{20, 1e-8});
    FAIL("expected CutoffError");
  } catch (const CutoffError& e) {
    CHECK(e.suggested_n_max() > 20);
    CHECK(coherent_leakage(25.0, e.suggested_n_max()) <= 1e-8);
  }
}

TEST_CASE("displacement stays bounded at large amplitude") {
  for (double a : {3.0, 7.0, 11.0}) {
    const Mat d = displacement(a, 80);
    CHECK(d.cwiseAbs2().colwise().sum().maxCoeff() <= 1.0 + 1e-12);
    // low columns are fully inside the cutoff while (sqrt n + a)^2 stays well below it
    CHECK(d.col(0).squaredNorm() == doctest::Approx(1.0 - coherent_leakage(a * a, 80)).epsilon(1e-10));
  }
  // generalized Laguerre closed form: <3|D(a)|1> = sqrt(1/3!) a^2 e^{-|a|^2/2} L_1^(2)(|a|^2), L_1^(2)(x) = 3 - x
  const cplx a(0.9, 0.4);
  const double x = std::norm(a);
  const cplx want = std::sqrt(1.0 / 6.0) * a * a * std::exp(-x / 2) * (3 - x);
  CHECK(std::abs(displacement(a, 10)(3, 1) - want) < 1e-14);
  CHECK(std::abs(displacement(a, 10)(1, 3) - std::sqrt(1.0 / 6.0) * std::conj(a) * std::conj(a) * std::exp(-x / 2) * (3 - x)) < 1e-14);
}

TEST_CASE("displacement matrix elements") {
  const cplx al(0.6, -0.3);
  const Mat d = displacement(al, 40);
  const Vec c = d.col(0);
  CHECK(fro(c, coherent_amplitudes(al, 40)) < 1e-12);
  // D(a) D(-a) = I on the low block
  const Mat p = d * displacement(-al, 40);
  CHECK(fro(p.topLeftCorner(15, 15), Mat::Identity(15, 15)) < 1e-10);
}

TEST_CASE("displaced thermal states") {
  const cplx al(0.5, 0.2);
  const Operator pure = displaced_thermal(al, std::numeric_limits<double>::infinity(), FockCutoff{});
  const Vec c = coherent_amplitudes(al, 40);
  CHECK(fro(pure.mat(), c * c.adjoint()) < 1e-12);

  const Operator th = displaced_thermal(0.0, 1.0, FockCutoff{});
  for (int n = 0; n < 10; ++n) CHECK(th.mat()(n, n).real() == doctest::Approx(0.5 * std::pow(0.5, n)).epsilon(1e-10));
  CHECK(fro(th.mat(), thermal_state(1.0, 40).mat()) < 1e-10);

  const Operator q = displaced_thermal_quadrature(al, 2.0, 40, 24);
  const Operator e = displaced_thermal(al, 2.0, FockCutoff{});
  CHECK(fro(q.mat().topLeftCorner(12, 12), e.mat().topLeftCorner(12, 12)) < 1e-6);
}

TEST_CASE("two-mode squeezed vacuum") {
  const PureState z = tmsv(1e-6, FockCutoff{});
  CHECK(std::abs(z.amp()(0)) == doctest::Approx(1.0).epsilon(1e-6));
  const PureState t = tmsv(0.5, FockCutoff{});
  const Operator marg = partial_trace(t.projector(), {0});
  CHECK(fro(marg.mat(), thermal_state(1.0, 40).mat()) < 1e-10);
  try {
    tmsv(0.9, FockCutoff{40, 1e-8});
    FAIL("expected CutoffError");
  } catch (const CutoffError& e) {
    CHECK(std::pow(0.9, e.suggested_n_max()) <= 1e-8);
  }
}

TEST_CASE("two-mode squeezer") {
  const SectorOp id = two_mode_squeezer(0.0, 12);
  CHECK(fro(id.dense(), Mat::Identity(144, 144)) < 1e-14);
  const double th = 0.5;
  const SectorOp s = two_mode_squeezer(th, 60);
  const Vec out = s.dense() * two_mode_ket(60, 0, 0);
  const double x = std::pow(std::tanh(th), 2);
  for (int n = 0; n < 8; ++n) CHECK(std::norm(out(n * 60 + n)) == doctest::Approx((1 - x) * std::pow(x, n)).epsilon(1e-10));
  CHECK(s.quality > 0);
  CHECK(two_mode_squeezer(0.05, 60).quality < 1e-8);
}

TEST_CASE("beamsplitter") {
  const SectorOp id = beamsplitter(1.0, 10);
  CHECK(fro(id.dense(), Mat::Identity(100, 100)) < 1e-14);
  const int n = 10;
  const Vec out = beamsplitter(0.5, n).dense() * two_mode_ket(n, 1, 0);
  CHECK(std::abs(out(1 * n + 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(std::abs(out(0 * n + 1)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  const Mat d = beamsplitter(0.3, n).dense();
  CHECK(fro((d.adjoint() * d).topLeftCorner(n, n), Mat::Identity(n, n)) < 1e-12);
}

TEST_CASE("gaussian observable spectrum") {
  const RVec g = gaussian_observable_diag(0.4, 20);
  for (int k = 0; k < 20; ++k) CHECK(g(k) == doctest::Approx(std::pow(std::tanh(0.4), 2 * k)));
}

TEST_CASE("heterodyne weight identity") {
  for (double th : {0.4, 0.88}) {
    for (int n = 0; n <= 10; ++n) {
      Mat rho = Mat::Zero(12, 12);
      rho(n, n) = 1.0;
      CHECK(heterodyne_expectation(rho, th) == doctest::Approx(std::pow(std::tanh(th), 2 * n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("additive noise channel") {
  const FockCutoff cut{40, 1e-8};
  const NoiseChannel ident = additive_noise_channel(std::numeric_limits<double>::infinity(), cut);
  REQUIRE(ident.channel.kraus().size() == 1);
  CHECK(fro(ident.channel.kraus()[0], Mat::Identity(40, 40)) == 0.0);

  CHECK_THROWS_AS(additive_noise_channel(1.0, cut), CutoffError);
  const NoiseChannel nc = additive_noise_channel(1.0, FockCutoff{80, 1e-8});
  Mat vac = Mat::Zero(80, 80);
  vac(0, 0) = 1.0;
  const Operator out = apply_channel(nc.channel, Operator({80}, vac));
  CHECK(mean_photons(out.mat()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fro(out.mat().topLeftCorner(10, 10), thermal_state(1.0, 80).mat().topLeftCorner(10, 10)) < 1e-8);
  CHECK(nc.deficit < 1e-6);
}

TEST_CASE("setup branches and parameters") {
  const FockCutoff cut{};
  const CvSetup lo = build_setup(CvParams{1.0, 1.0}, cut);
  CHECK(lo.branch == CvBranch::pure_low_gain);
  CHECK(std::tanh(lo.theta) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(lo.realization_residual >= 0);
  CHECK(lo.realization_residual < 1e-8);

  const CvSetup hi = build_setup(CvParams{2.0, 1.0}, FockCutoff{60, 1e-8});
  CHECK(hi.branch == CvBranch::pure_high_gain);
  CHECK(std::tanh(hi.theta) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(hi.weight == doctest::Approx(0.5));

  CvParams c{1.0, 1.0, 2.0, true};
  const CvSetup cj = build_setup(c, cut);
  CHECK(cj.branch == CvBranch::conjugation);
  CHECK(cj.x == doctest::Approx(0.6));
  CHECK(cj.k == doctest::Approx(2 * std::sqrt(0.6) / 3));
  CHECK(cj.weight == doctest::Approx(1 / (cj.k * cj.k + 1)));
  CHECK(cj.z_source == "beamsplitter");
  CHECK(cj.realization_residual < 1e-12);

  const CvSetup mx = build_setup(CvParams{1.0, 1.0, 2.0}, cut);
  CHECK(mx.branch == CvBranch::mixed);
  CHECK(mx.nu == doctest::Approx(3.0));

  CHECK_THROWS_AS(build_setup(CvParams{-1.0, 1.0}, cut), ArgumentError);
  CHECK_THROWS_AS(build_setup(CvParams{1.0, 0.0}, cut), ArgumentError);
}

TEST_CASE("canonical observable matches its defining integral") {
  // difference sectors: int d^2b/pi |t conj b><t conj b| (x) |b><b|, by the polar rule with weight e^{-|b|^2 (1+t^2)}
  const double t = 0.8;
  const int n = 8;
  const SectorOp z = canonical_z(t, SectorKind::difference, n);
  const Mat zd = z.dense();
  const double s = 1 + t * t;
  Mat acc = Mat::Zero(n * n, n * n);
  for (const auto& nd : gaussian_polar_rule(n + 2, 4 * n, s)) {
    // coherent_amplitudes carries e^{-|.|^2/2}; the rule weight carries s e^{-s|b|^2}
    const Vec v = kron(Mat(coherent_amplitudes(t * std::conj(nd.z), n)), Mat(coherent_amplitudes(nd.z, n)));
    acc += nd.w / s * std::exp(s * std::norm(nd.z)) * v * v.adjoint();
  }
  CHECK(fro(acc, zd) < 1e-10);
}

TEST_CASE("run_setup matches the oracle at g=1, lambda=1") {
  const CvParams p{1.0, 1.0};
  const FockCutoff cut{};
  const CvSetup s = build_setup(p, cut);
  OracleConfig oc;
  for (const std::string dev : {"identity", "attenuator:0.8", "vacuum"}) {
    const Channel c = make_device(dev, p, cut);
    CAPTURE(dev);
    CHECK(std::abs(run_setup(s, c).score - average_fidelity_oracle(c, p, cut, oc).value) <= 1e-4);
  }
  CHECK(run_setup(s, make_device("identity", p, cut)).score == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(run_setup(s, make_device("vacuum", p, cut)).score == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("vacuum replacement follows lambda/(1+lambda)") {
  for (double lam : {0.5, 1.0, 2.0}) {
    const CvParams p{1.0, lam};
    const FockCutoff cut{60, 1e-8};
    const OracleResult o = average_fidelity_oracle(vacuum_device(60), p, cut);
    CHECK(o.value == doctest::Approx(lam / (1 + lam)).epsilon(1e-6));
    CHECK(run_setup(build_setup(p, cut), vacuum_device(60)).score == doctest::Approx(lam / (1 + lam)).epsilon(1e-9));
  }
}

TEST_CASE("run_setup matches the oracle off the default point") {
  struct Case {
    CvParams p;
    int n;
  };
  for (const Case& c : {Case{{1.2, 1.0}, 40}, Case{{1.0, 0.5}, 50}, Case{{1.2, 1.0, 2.0}, 45}}) {
    const CvSetup s = build_setup(c.p, FockCutoff{c.n, 1e-8});
    for (const std::string dev : {"identity", "attenuator:0.8"}) {
      const Channel ch = make_device(dev, c.p, FockCutoff{c.n, 1e-8});
      CAPTURE(dev);
      CAPTURE(c.p.g);
      CAPTURE(c.p.lambda);
      CHECK(std::abs(run_setup(s, ch).score - average_fidelity_oracle(ch, c.p, FockCutoff{c.n, 1e-8}).value) <= 1e-4);
    }
  }
}

TEST_CASE("scaled device keeps the score and scales p_succ") {
  const CvParams p{1.0, 1.0};
  const CvSetup s = build_setup(p, FockCutoff{});
  const SetupResult a = run_setup(s, make_device("attenuator:0.8", p, FockCutoff{}));
  const Channel att = attenuator_device(0.8, 40);
  std::vector<Mat> ks;
  for (const auto& k : att.kraus()) ks.push_back(k * std::sqrt(0.5));
  const SetupResult b = run_setup(s, Channel::from_kraus(ks));
  CHECK(b.score == doctest::Approx(a.score).epsilon(1e-12));
  CHECK(b.p_succ == doctest::Approx(0.5 * a.p_succ).epsilon(1e-12));
  CHECK_THROWS_AS(run_setup(s, Channel::scaled_identity(40, 0.0)), VanishingSuccess);
  CHECK_THROWS_AS(run_setup(s, Channel::identity(30)), ArgumentError);
}

TEST_CASE("mixed branch: dressed observable equals noise then Z") {
  const CvParams p{1.0, 1.0, 2.0};
  const FockCutoff cut{};
  const CvSetup s = build_setup(p, cut);
  const NoiseChannel nc = additive_noise_channel(s.nu, cut);
  for (const std::string dev : {"identity", "attenuator:0.8"}) {
    const Channel c = make_device(dev, p, cut);
    CHECK(std::abs(run_setup(s, c).score - run_setup_noise_first(s, c, nc.channel).score) < 1e-6);
  }
}

TEST_CASE("serial and parallel CV evaluation agree") {
  const CvParams p{1.0, 1.0};
  const FockCutoff cut{30, 1e-5};
  const CvSetup s = build_setup(p, cut);
  const Channel c = make_device("attenuator:0.8", p, cut);
  CHECK(run_setup(s, c, Exec::serial).score == run_setup(s, c, Exec::parallel).score);
  OracleConfig a, b;
  a.exec = Exec::serial;
  b.exec = Exec::parallel;
  a.guard_tol = b.guard_tol = 1e-4;
  CHECK(average_fidelity_oracle(c, p, cut, a).value == average_fidelity_oracle(c, p, cut, b).value);
}

TEST_CASE("oracle guard suggests a larger cutoff") {
  const CvParams p{2.0, 1.0};
  try {
    average_fidelity_oracle(Channel::identity(30), p, FockCutoff{30, 1e-8});
    FAIL("expected CutoffError");
  } catch (const CutoffError& e) {
    CHECK(e.suggested_n_max() > 30);
  }
}

TEST_CASE("homodyne sampler reproduces heterodyne statistics") {
  const cplx al(0.7, -0.4);
  const Vec c = coherent_amplitudes(al, 20);
  const Mat rho = c * c.adjoint() / c.squaredNorm();
  HomodyneSampler hs(rho, 99);
  const auto g = hs.sample(4000);
  cplx mean = 0;
  double spread = 0;
  for (const auto& x : g) mean += x;
  mean /= double(g.size());
  for (const auto& x : g) spread += std::norm(x - al);
  spread /= double(g.size());
  CHECK(std::abs(mean - al) < 0.06);
  CHECK(spread == doctest::Approx(1.0).epsilon(0.08));

  // weighted heterodyne expectation reconstructed from the quadrature pairs
  const double th = 0.6;
  double mc = 0;
  for (const auto& x : g) mc += heterodyne_weight(x, th);
  mc /= double(g.size());
  const double exact = heterodyne_expectation(rho, th);
  CHECK(std::abs(mc - exact) < 0.05 * exact + 0.02);

  HomodyneSampler again(rho, 99);
  CHECK(again.sample() == g.front());
}

TEST_CASE("cv params json") {
  const CvParams p{1.5, 0.7, std::numeric_limits<double>::infinity(), true};
  const json j = to_json(p);
  CHECK(j["mu"].is_null());
  const CvParams q = cv_params_from_json(j);
  CHECK(q.pure());
  CHECK(q.g == 1.5);
  CHECK(q.conjugate);
  CHECK(cv_params_from_json(json{{"mu", "inf"}}).pure());
  CHECK(cv_params_from_json(json{{"mu", 2.0}}).mu == 2.0);
  CHECK_THROWS_AS(cv_params_from_json(json{{"mu", "lots"}}), ArgumentError);
}
