#include <cmath>
#include <sstream>

#include "qbench/cv.hpp"

namespace qb {

std::string to_string(CvBranch b) {
  switch (b) {
    case CvBranch::pure_low_gain: return "pure_low_gain";
    case CvBranch::pure_high_gain: return "pure_high_gain";
    case CvBranch::mixed: return "mixed";
    case CvBranch::conjugation: return "conjugation";
  }
  return "?";
}

namespace {

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os << label << v;
  return os.str();
}

// Max entry difference restricted to both photon numbers below n/2.
double low_block_residual(const SectorOp& a, const SectorOp& b) {
  const int half = a.n_max() / 2;
  double m = 0;
  for (int s = a.sector_min(); s <= a.sector_max(); ++s) {
    const int r0 = a.r_first(s);
    for (int i = 0; i < a.size(s); ++i)
      for (int j = 0; j < a.size(s); ++j) {
        const int r = r0 + i, q = r0 + j;
        if (r < half && q < half && a.partner(s, r) < half && a.partner(s, q) < half)
          m = std::max(m, std::abs(a.block(s)(i, j) - b.block(s)(i, j)));
      }
  }
  return m;
}

}  // namespace

CvSetup build_setup(const CvParams& p, const FockCutoff& cut, const SetupConfig& cfg) {
  p.validate();
  cut.validate();
  CvSetup s;
  s.params = p;
  s.cutoff = cut;
  s.x = p.x();
  s.k = p.k();
  s.nu = p.nu();
  s.t = p.g * s.k;
  const int n = cut.n_max;

  const PureState psi = tmsv(s.x, cut);
  s.leakage = std::pow(s.x, n);
  s.input_amplitudes.resize(n);
  for (int k = 0; k < n; ++k) s.input_amplitudes(k) = psi.amp()(k * n + k);

  s.stages.push_back(fmt("tmsv x=", s.x));
  s.stages.push_back("device on A");
  if (!std::isinf(s.nu)) s.stages.push_back(fmt("additive noise on A' nu=", s.nu));

  if (p.conjugate) {
    s.branch = CvBranch::conjugation;
    s.weight = 1.0 / (1.0 + s.t * s.t);
    const double phi = std::acos(std::sqrt(s.t * s.t / (1.0 + s.t * s.t)));
    SectorOp z(SectorKind::sum, n);
    for (int S = z.sector_min(); S <= z.sector_max(); ++S) {
      const Eigen::MatrixXd U = beamsplitter_sector(phi, S);
      const Eigen::VectorXd row = U.row(0).segment(z.r_first(S), z.size(S));
      z.block(S) = (s.weight * row * row.transpose()).cast<cplx>();
    }
    s.z = std::move(z);
    s.z_source = "beamsplitter";
    if (cfg.check_realization) s.realization_residual = low_block_residual(s.z, canonical_z(s.t, SectorKind::sum, n));
    s.stages.push_back(fmt("beamsplitter transmissivity=", s.t * s.t / (1.0 + s.t * s.t)));
    s.stages.push_back("discard A', photodetect R, count vacuum");
    s.stages.push_back(fmt("score weight=", s.weight));
  } else {
    if (!p.pure())
      s.branch = CvBranch::mixed;
    else
      s.branch = s.t <= 1.0 ? CvBranch::pure_low_gain : CvBranch::pure_high_gain;
    const bool low = s.t <= 1.0;
    const double T = low ? s.t : 1.0 / s.t;
    s.weight = low ? 1.0 : T * T;
    s.z = canonical_z(s.t, SectorKind::difference, n);
    s.z_source = "closed_form";
    if (T < 1.0) {
      s.theta = std::atanh(T);
      // the squeezer spreads a column over roughly sinh^2(theta) * n extra levels
      const double sh2 = T * T / (1 - T * T);
      const int pad = std::max(cfg.realization_pad, static_cast<int>(std::ceil(1.5 * sh2 * n)));
      if (cfg.check_realization && pad <= cfg.max_realization_pad) {
        SectorOp real = squeezer_observable(T, low, n, n + pad);
        for (int q = real.sector_min(); q <= real.sector_max(); ++q) real.block(q) *= s.weight;
        s.realization_residual = low_block_residual(real, s.z);
      }
    } else {
      s.theta = std::numeric_limits<double>::infinity();
    }
    s.stages.push_back(fmt("two-mode squeezer theta=", s.theta));
    s.stages.push_back(low ? "G_theta on A'" : "G_theta on R");
    if (!low) s.stages.push_back(fmt("score weight=", s.weight));
  }
  s.observable = dress_with_noise(s.z, s.nu, cfg.n_radial);
  return s;
}

namespace {

template <class Eval>
SetupResult accumulate(const CvSetup& s, const Channel& device, Exec exec, double p_min, Eval eval) {
  const int n = s.cutoff.n_max;
  if (device.dim_in() != n || device.dim_out() != n) {
    std::ostringstream os;
    os << "run_setup: device acts on dimension " << device.dim_in() << " -> " << device.dim_out()
       << ", setup cutoff is " << n;
    throw ArgumentError(os.str());
  }
  const auto& ks = device.kraus();
  const int nk = static_cast<int>(ks.size());
  std::vector<double> e(nk), p(nk);
  const auto c = s.input_amplitudes.asDiagonal();
  auto body = [&](int k) {
    const Mat M = ks[k] * c;
    p[k] = M.squaredNorm();
    e[k] = eval(M);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nk; ++k) body(k);
  } else {
    for (int k = 0; k < nk; ++k) body(k);
  }
  SetupResult r;
  double E = 0;
  for (int k = 0; k < nk; ++k) {
    E += e[k];
    r.p_succ += p[k];
  }
  if (r.p_succ < p_min) {
    std::ostringstream os;
    os << "run_setup: success probability " << r.p_succ << " below " << p_min;
    throw VanishingSuccess(os.str());
  }
  r.score = E / r.p_succ;
  return r;
}

}  // namespace

SetupResult run_setup(const CvSetup& s, const Channel& device, Exec exec, double p_min) {
  return accumulate(s, device, exec, p_min, [&](const Mat& M) { return s.observable.sandwich(M).real(); });
}

SetupResult run_setup_noise_first(const CvSetup& s, const Channel& device, const Channel& noise, Exec exec,
                                  double p_min) {
  return accumulate(s, device, exec, p_min, [&](const Mat& M) {
    double acc = 0;
    for (const auto& L : noise.kraus()) acc += s.z.sandwich(L * M).real();
    return acc;
  });
}

json to_json(const CvParams& p) {
  return json{{"g", p.g},
              {"lambda", p.lambda},
              {"mu", p.pure() ? json(nullptr) : json(p.mu)},
              {"conjugate", p.conjugate}};
}

CvParams cv_params_from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("CvParams JSON must be an object");
  CvParams p;
  try {
    p.g = j.value("g", 1.0);
    p.lambda = j.value("lambda", 1.0);
    if (j.contains("mu") && !j["mu"].is_null()) {
      if (j["mu"].is_string()) {
        if (j["mu"].get<std::string>() != "inf") throw ArgumentError("CvParams: mu must be a number, null or \"inf\"");
      } else {
        p.mu = j["mu"].get<double>();
      }
    }
    p.conjugate = j.value("conjugate", false);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("CvParams JSON: ") + e.what());
  }
  p.validate();
  return p;
}

json to_json(const CvSetup& s) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"params", to_json(s.params)},
              {"cutoff", {{"n_max", s.cutoff.n_max}, {"leak_tol", s.cutoff.leak_tol}}},
              {"branch", to_string(s.branch)},
              {"x", s.x},
              {"k", s.k},
              {"nu", num(s.nu)},
              {"t", s.t},
              {"theta", num(s.theta)},
              {"weight", s.weight},
              {"z_source", s.z_source},
              {"realization_residual", s.realization_residual},
              {"stages", s.stages},
              {"leakage", s.leakage}};
}

}  // namespace qb
