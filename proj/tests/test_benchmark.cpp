#include "helpers.hpp"
#include "qbench/benchmark.hpp"
#include "qbench/errors.hpp"
#include "qbench/groups.hpp"
#include "qbench/kernels.hpp"
#include "qbench/random.hpp"
#include "qbench/scenarios.hpp"

using namespace qb;
using qbt::diag;
using qbt::fro;

namespace {

const double kSqrt2 = std::sqrt(2.0);

GroupRep pauli_pairs(bool mismatched = false) {
  std::vector<std::pair<Mat, Mat>> el;
  for (const Mat& p : pauli_group_qubit()) el.emplace_back(p, p);
  if (mismatched) el[1] = {pauli_x(), Mat::Identity(2, 2)};
  return GroupRep(el);
}

}  // namespace

TEST_CASE("product numerical range on reference operators") {
  const Operator p_plus({2, 2}, (Mat::Identity(4, 4) + qbt::swap_op(2)) / 2.0);
  const PnrResult a = product_numerical_range(p_plus);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.lower_bound <= a.value + 1e-12);
  CHECK(a.upper_bound >= a.value - 1e-12);
  CHECK(product_numerical_range(equator_omega()).value == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(product_numerical_range(chsh_omega()).value == doctest::Approx(kSqrt2 / 2).epsilon(1e-9));
  Mat nh = Mat::Zero(4, 4);
  nh(0, 1) = 1;
  CHECK_THROWS_AS(product_numerical_range(Operator({2, 2}, nh)), ContractViolation);
}

TEST_CASE("seesaw value is attained by its product vectors") {
  Rng rng(31);
  const Operator m({2, 3}, random_hermitian(6, rng));
  const PnrResult r = product_numerical_range(m);
  const Vec ab = kron(Mat(r.a), Mat(r.b));
  CHECK((ab.adjoint() * m.mat() * ab)(0).real() == doctest::Approx(r.value).epsilon(1e-10));
  const GridBracket g = pnr_grid_oracle(m, 0.05);
  CHECK(g.lower <= r.value + 1e-9);
  CHECK(r.value <= g.upper + 1e-9);
}

TEST_CASE("grid oracle brackets") {
  const Operator p_plus({2, 2}, (Mat::Identity(4, 4) + qbt::swap_op(2)) / 2.0);
  const GridBracket a = pnr_grid_oracle(p_plus, 0.05);
  CHECK(a.lower <= 1.0 + 1e-12);
  CHECK(a.upper >= 1.0 - 1e-12);
  const GridBracket e = pnr_grid_oracle(equator_omega(), 0.05);
  CHECK(e.lower <= 0.375 + 1e-12);
  CHECK(e.upper >= 0.375 - 1e-12);
  CHECK(e.points > 0);
  Rng rng(32);
  CHECK_THROWS_AS(pnr_grid_oracle(Operator({5, 5}, random_hermitian(25, rng)), 0.01), RefusalError);
}

TEST_CASE("deterministic benchmarks") {
  const DetBenchmark t2 = det_benchmark(teleport_omega(2));
  CHECK(t2.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(fro(t2.tau_min.mat(), Mat::Identity(2, 2) / 2.0) < 1e-6);
  // d=3 through the covariant shortcut; the unrestricted simplex search takes minutes here
  const GroupRep c3 = diagonal_rep(clifford_group(3));
  const DetBenchmark t3 = det_benchmark(teleport_omega(3), {}, &c3);
  CHECK(t3.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fro(t3.tau_min.mat(), Mat::Identity(3, 3) / 3.0) < 1e-12);
  const DetBenchmark eq = det_benchmark(equator_omega());
  CHECK(eq.value == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(fro(eq.tau_min.mat(), Mat::Identity(2, 2) / 2.0) < 1e-3);
  CHECK_THROWS_AS(det_benchmark(chsh_omega()), PptViolation);
}

TEST_CASE("symmetry shortcut agrees with the simplex search") {
  const GroupRep rep = diagonal_rep(clifford_group(2));
  const DetBenchmark a = det_benchmark(teleport_omega(2), {}, &rep);
  const DetBenchmark b = det_benchmark(teleport_omega(2));
  CHECK(a.method == PnrMethod::closed_form);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-7));
}

TEST_CASE("probabilistic benchmarks") {
  const Operator half({2}, Mat::Identity(2, 2) / 2.0);
  CHECK(prob_benchmark(ProbTest(teleport_omega(2), half)).value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  const ProbTest skew(teleport_omega(2), Operator({2}, diag({0.9, 0.1})));
  const PnrResult s = prob_benchmark(skew);
  CHECK(s.value > 2.0 / 3.0 + 1e-3);
  const GridBracket g = pnr_grid_oracle(conjugate_by_inverse_sqrt(skew.omega(), skew.sigma_A().mat()), 0.05);
  CHECK(g.lower <= s.value + 1e-9);
  CHECK(s.value <= g.upper + 1e-9);
  CHECK(prob_benchmark(ProbTest(chsh_omega(), half)).value == doctest::Approx(kSqrt2).epsilon(1e-9));
}

TEST_CASE("covariant benchmark") {
  CHECK(covariant_benchmark(teleport_omega(2), diagonal_rep(clifford_group(2))) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(covariant_benchmark(chsh_omega(), pauli_pairs()) == doctest::Approx(kSqrt2).epsilon(1e-9));
  CHECK(covariant_benchmark(equator_omega(), pauli_pairs()) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK_THROWS_AS(covariant_benchmark(equator_omega(), pauli_pairs(true)), PreconditionError);
  // commuting group: not irreducible on the input
  const GroupRep diag_only(std::vector<std::pair<Mat, Mat>>{{Mat::Identity(2, 2), Mat::Identity(2, 2)},
                                                            {pauli_z(), pauli_z()}});
  CHECK_THROWS_AS(covariant_benchmark(equator_omega(), diag_only), PreconditionError);
}

TEST_CASE("covariance checks") {
  const GroupRep xyz(std::vector<std::pair<Mat, Mat>>{{pauli_x(), pauli_x()}, {pauli_y(), pauli_y()}, {pauli_z(), pauli_z()}});
  CHECK(check_covariance(chsh_omega(), xyz));
  CHECK(check_covariance(equator_omega(), pauli_pairs()));
  int failing = -1;
  CHECK_FALSE(check_covariance(equator_omega(), pauli_pairs(true), 1e-9, &failing));
  CHECK(failing == 1);
  CHECK(is_irreducible(pauli_pairs()));
}

TEST_CASE("optimal measure-and-prepare channels reach the benchmark") {
  const Channel t = optimal_mp_channel(teleport_omega(2), diagonal_rep(clifford_group(2)));
  CHECK(score_det_jam(teleport_omega(2), jamiolkowski(t)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  const Channel e = optimal_mp_channel(equator_omega(), pauli_pairs());
  CHECK(score_det_jam(equator_omega(), jamiolkowski(e)) == doctest::Approx(0.75).epsilon(1e-9));
  const Channel c = optimal_mp_channel(chsh_omega(), pauli_pairs());
  CHECK(score_det_jam(chsh_omega(), jamiolkowski(c)) == doctest::Approx(kSqrt2).epsilon(1e-9));
  CHECK(partial_transpose(jamiolkowski(c), 1).is_psd());
}

TEST_CASE("probabilistic measure-and-prepare reaches the probabilistic benchmark") {
  const ProbTest skew(teleport_omega(2), Operator({2}, diag({0.8, 0.2})));
  const ProbScore s = score_prob(skew, optimal_prob_mp_channel(skew));
  CHECK(s.score == doctest::Approx(prob_benchmark(skew).value).epsilon(1e-8));
}

TEST_CASE("ppt offset") {
  const Shifted x = ppt_offset(Operator({2}, pauli_x()));
  CHECK(x.offset == doctest::Approx(1.0));
  CHECK(fro(x.shifted.mat(), pauli_x() + Mat::Identity(2, 2)) < 1e-14);
  const Shifted p = ppt_offset(Operator({2}, diag({0.5, 2})));
  CHECK(p.offset == doctest::Approx(2.0));
}

TEST_CASE("PPT test") {
  CHECK(is_ppt(teleport_omega(3)));
  CHECK(is_ppt(equator_omega()));
  CHECK_FALSE(is_ppt(chsh_omega()));
}

TEST_CASE("serial and OpenMP kernels agree") {
  Rng rng(33);
  const Mat m = random_hermitian(9, rng);
  std::vector<Vec> starts;
  for (int i = 0; i < 16; ++i) starts.push_back(random_unit_vector(3, rng));
  const auto s = kernels::seesaw_multistart_serial(m, 3, 3, starts, 1e-12, 500);
  const auto p = kernels::seesaw_multistart(m, 3, 3, starts, 1e-12, 500);
  REQUIRE(s.size() == p.size());
  for (size_t i = 0; i < s.size(); ++i) CHECK(s[i].value == p[i].value);
  CHECK(kernels::best_run(s).value == kernels::best_run(p).value);

  const kernels::SphereGrid g{3, 24, 24};
  const auto gs = kernels::grid_scan_serial(m, 3, 3, g, true);
  const auto gp = kernels::grid_scan(m, 3, 3, g, true);
  CHECK(gs.max == gp.max);
  CHECK(gs.argmax == gp.argmax);
}

TEST_CASE("sphere grid covers the sphere") {
  const kernels::SphereGrid g{2, 20, 40};
  Rng rng(34);
  for (int t = 0; t < 50; ++t) {
    const Vec v = random_unit_vector(2, rng);
    double best = 1e9;
    for (long long i = 0; i < g.size(); ++i) {
      const double ov = std::abs(g.point(i).dot(v));
      best = std::min(best, std::sqrt(std::max(0.0, 2 - 2 * ov)));
    }
    CHECK(best <= g.covering_radius() + 1e-12);
  }
}
