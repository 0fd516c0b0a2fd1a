#include "rmt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rmt/biorth.hpp"
#include "rmt/hcint.hpp"
#include "rmt/parallel.hpp"
#include "rmt/pdfs.hpp"
#include "rmt/verify.hpp"

namespace rmt {

double parse_number(const std::string& raw) {
  std::string text = raw;
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }),
             text.end());
  auto whole = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) throw InvalidSpec("not a number: '" + raw + "'");
    return v;
  };
  const std::size_t slash = text.find('/');
  if (slash == std::string::npos) return whole(text);
  const double num = whole(text.substr(0, slash)), den = whole(text.substr(slash + 1));
  if (den == 0.0) throw InvalidSpec("zero denominator in '" + raw + "'");
  return num / den;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (!text.empty() && text.back() == ',') throw InvalidSpec("trailing comma in '" + text + "'");
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

std::string emit_histogram(const std::vector<double>& samples, int bins, double lo, double hi,
                           const std::optional<std::function<double(double)>>& density) {
  if (bins < 2) throw InvalidParams("emit_histogram: need at least 2 bins");
  if (!(hi > lo)) throw InvalidParams("emit_histogram: empty range");
  const double width = (hi - lo) / bins;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    if (!(x >= lo && x < hi)) continue;
    const int i = std::min(bins - 1, static_cast<int>((x - lo) / width));
    ++counts[i];
  }
  std::ostringstream out;
  out << "bin_left,bin_right,count,density_estimate" << (density ? ",exact_density" : "") << "\n";
  const double n = static_cast<double>(samples.size());
  for (int i = 0; i < bins; ++i) {
    const double left = lo + i * width, right = lo + (i + 1) * width;
    out << fmt(left) << ',' << fmt(right) << ',' << counts[i] << ','
        << fmt(n > 0 ? counts[i] / (n * width) : 0.0);
    if (density) out << ',' << fmt((*density)(0.5 * (left + right)));
    out << "\n";
  }
  return out.str();
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by the subcommands that build a product ensemble.
struct EnsembleFlags {
  std::string parity = "even";
  int m = 1;
  int M = 1;
  std::string nu = "0";
  std::string b0 = "elementary";
  std::string b0_values;
  double t = 0.0;
  std::string a_values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--parity", parity, "even | odd")->check(CLI::IsMember({"even", "odd"}));
    cmd->add_option("--m", m, "number of positive eigenvalues");
    cmd->add_option("--M", M, "number of Gaussian factors");
    cmd->add_option("--nu", nu, "comma-separated exponents, fractions allowed");
    cmd->add_option("--b0", b0, "elementary | gaussian | fixed")
        ->check(CLI::IsMember({"elementary", "gaussian", "fixed"}));
    cmd->add_option("--b0-values", b0_values, "eigenvalues of a fixed initial matrix");
    cmd->add_option("--t", t, "weight of the Gaussian sum term");
    cmd->add_option("--a", a_values, "eigenvalues of the rotated summand");
  }

  EnsembleSpec spec() const {
    EnsembleSpec e;
    e.parity = parse_parity(parity);
    e.m = m;
    e.M = M;
    e.nu = parse_number_list(nu);
    e.b0_kind = b0 == "elementary" ? B0Kind::elementary : b0 == "gaussian" ? B0Kind::gaussian_antisym : B0Kind::fixed;
    e.b0_values = parse_number_list(b0_values);
    e.t = t;
    e.a_values = parse_number_list(a_values);
    e.validate();
    return e;
  }
};

struct Common {
  std::uint64_t seed = 7;
  std::size_t samples = 10000;
  std::optional<unsigned> threads;
  std::string out_path;
  std::string output = "json";

  void attach(CLI::App* cmd, bool sampling, bool formats = false) {
    cmd->add_option("--seed", seed, "master seed");
    if (sampling) cmd->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "worker threads (default: RMT_THREADS, then hardware)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_path, "write results to this file instead of stdout");
    if (formats) cmd->add_option("--output", output, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  }
};

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + c.out_path + "'");
  f << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

TestReport hc_report(const HCGroup& g, const HCResult& r, std::uint64_t seed) {
  TestReport rep;
  rep.name = "hc_" + to_string(g.kind) + "_" + std::to_string(g.size);
  rep.statistic = std::abs(r.z_score);
  rep.threshold = kHCZThreshold;
  rep.passed = r.passed;
  rep.n_samples = r.n_samples;
  rep.seed = seed;
  rep.details = {{"exact_rhs", r.exact_rhs},
                 {"log_abs_rhs", r.log_abs_rhs},
                 {"mc_mean", r.mc_mean},
                 {"mc_stderr", r.mc_stderr},
                 {"z_score", r.z_score}};
  return rep;
}

// Smallest eigenvalue draws of an m = 1 ensemble, tested against its tabulated density.
TestReport density_ks(const EnsembleSpec& spec, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (spec.m != 1) throw UnsupportedCase("verify-density: only m = 1 has a one-dimensional marginal here");
  const RngStream rng(seed, 0);
  TestReport rep = with_retry(
      [&](std::size_t count, const RngStream& base) {
        const std::vector<double> xs = mc_collect(
            count, base, [&](RngStream& r) { return sample_product(spec, r).values.front(); }, workers);
        const double top = *std::max_element(xs.begin(), xs.end());
        const TabulatedCdf cdf([&](double x) { return density_product(make_spectrum({x}), spec).value; },
                               4.0 * top, 20000);
        TestReport t = ks_one_sample(xs, [&](double x) { return cdf(x) / cdf.total_mass(); }, 0.01,
                                     "density_ks_" + to_string(spec.parity) + "_M" + std::to_string(spec.M));
        t.details["tabulated_mass"] = cdf.total_mass();
        return t;
      },
      n, rng);
  rep.details["nu"] = spec.nu;
  return rep;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random anti-symmetric matrix products: sampling, densities and verification"};
  app.name("rmt");
  app.require_subcommand(1);

  EnsembleFlags ens;
  Common common;

  // sample
  CLI::App* sample = app.add_subcommand("sample", "draw eigenvalues of a product ensemble");
  ens.attach(sample);
  common.attach(sample, true, true);
  int bins = 0;
  std::string range;
  bool with_density = false;
  sample->add_option("--bins", bins, "emit a histogram of lambda_1 with this many bins")->check(CLI::Range(2, 1 << 20));
  sample->add_option("--range", range, "histogram range lo,hi");
  sample->add_flag("--with-density", with_density, "append the exact density at bin midpoints (m = 1)");

  // density
  CLI::App* density = app.add_subcommand("density", "evaluate a joint density");
  EnsembleFlags dens_ens;
  dens_ens.attach(density);
  Common dens_common;
  dens_common.attach(density, false);
  std::string lambda;
  std::string kind = "product";
  int complex_K = 0;
  density->add_option("--lambda", lambda, "points (comma-separated)")->required();
  density->add_option("--kind", kind, "product | complex")->check(CLI::IsMember({"product", "complex"}));
  density->add_option("--K", complex_K, "number of complex factors (complex kind; --nu lists their exponents)");

  // verify-hc
  CLI::App* vhc = app.add_subcommand("verify-hc", "Monte Carlo check of a group integral");
  Common hc_common;
  hc_common.attach(vhc, true);
  std::string group = "orth_even", hx, hy;
  int hc_size = 1;
  vhc->add_option("--group", group, "unitary | orth_even | orth_odd | symplectic")
      ->check(CLI::IsMember({"unitary", "orth_even", "orth_odd", "symplectic"}));
  vhc->add_option("--m,--N", hc_size, "group size parameter")->check(CLI::PositiveNumber);
  vhc->add_option("--x", hx, "first spectrum")->required();
  vhc->add_option("--y", hy, "second spectrum")->required();

  // verify-density
  CLI::App* vden = app.add_subcommand("verify-density", "KS test of sampled eigenvalues against the density");
  EnsembleFlags vden_ens;
  vden_ens.attach(vden);
  Common vden_common;
  vden_common.attach(vden, true);

  // verify-correspondence
  CLI::App* vcor = app.add_subcommand("verify-correspondence", "real product against its complex counterpart");
  Common cor_common;
  cor_common.attach(vcor, true);
  std::string cor_case = "cor1even", cor_nu = "0", cor_shapes;
  int cor_m = 1, cor_M = 1;
  vcor->add_option("--case", cor_case, "cor1even | prop56 | prop57")
      ->check(CLI::IsMember({"cor1even", "prop56", "prop57"}));
  vcor->add_option("--m", cor_m, "1 or 2");
  vcor->add_option("--M", cor_M, "number of Gaussian factors");
  vcor->add_option("--nu", cor_nu, "comma-separated exponents");
  vcor->add_option("--shapes", cor_shapes, "override the Gamma shapes of the m = 1 reference");

  // biorth-check
  CLI::App* bcheck = app.add_subcommand("biorth-check", "biorthogonality of the polynomial/function pair");
  Common bi_common;
  bi_common.attach(bcheck, false);
  int bi_M = 1, n_max = 4;
  std::string bi_nu = "0";
  bcheck->add_option("--M", bi_M, "number of Gaussian factors");
  bcheck->add_option("--nu", bi_nu, "comma-separated exponents");
  bcheck->add_option("--n-max", n_max, "largest degree")->check(CLI::Range(0, 12));

  // heat-check
  CLI::App* heat = app.add_subcommand("heat-check", "finite-difference heat equation and W identity");
  Common heat_common;
  heat_common.attach(heat, false);
  std::string heat_parity = "even";
  int heat_m = 1, trials = 100;
  double heat_t = 1.0, heat_h = 1e-3;
  heat->add_option("--parity", heat_parity, "even | odd")->check(CLI::IsMember({"even", "odd"}));
  heat->add_option("--m", heat_m, "number of coordinates (1..3)");
  heat->add_option("--t", heat_t, "time");
  heat->add_option("--step", heat_h, "relative finite-difference step");
  heat->add_option("--trials", trials, "random points for the W identity (m >= 2)");

  // report-all
  CLI::App* all = app.add_subcommand("report-all", "run the full acceptance suite");
  Common all_common;
  all_common.attach(all, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rmt: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  auto finish = [&](const Common& c, const nlohmann::json& j, bool passed) {
    emit(c, json_text(j), out);
    return passed ? kExitOk : kExitTestFailure;
  };

  try {
    if (*sample) {
      set_default_workers(resolve_workers(common.threads));
      const EnsembleSpec spec = ens.spec();
      const RngStream rng(common.seed, 0);
      std::vector<std::vector<double>> draws(common.samples);
      const std::size_t batches = (common.samples + kBatchSize - 1) / kBatchSize;
      parallel_for(batches, [&](std::size_t bi) {
        RngStream r = rng.substream(bi);
        for (std::size_t i = bi * kBatchSize; i < std::min(common.samples, (bi + 1) * kBatchSize); ++i)
          draws[i] = sample_product(spec, r).values;
      });
      if (bins > 0) {
        const std::vector<double> lr = range.empty() ? std::vector<double>{} : parse_number_list(range);
        if (lr.size() != 2) throw UsageError("--bins needs --range lo,hi");
        std::vector<double> first;
        for (const auto& d : draws) first.push_back(d.front());
        std::optional<std::function<double(double)>> exact;
        if (with_density) {
          if (spec.m != 1) throw UsageError("--with-density needs m = 1");
          exact = [&](double x) { return x > 0.0 ? density_product(make_spectrum({x}), spec).value : 0.0; };
        }
        emit(common, emit_histogram(first, bins, lr[0], lr[1], exact), out);
        return kExitOk;
      }
      if (common.output == "csv") {
        std::ostringstream s;
        s << "sample_index";
        for (int j = 1; j <= spec.m; ++j) s << ",lambda_" << j;
        s << "\n";
        for (std::size_t i = 0; i < draws.size(); ++i) {
          s << i;
          for (double v : draws[i]) s << ',' << fmt(v);
          s << "\n";
        }
        emit(common, s.str(), out);
      } else {
        nlohmann::json j = {{"seed", common.seed}, {"n_samples", common.samples}, {"samples", draws}};
        emit(common, json_text(j), out);
      }
      return kExitOk;
    }

    if (*density) {
      const std::vector<double> pts = parse_number_list(lambda);
      DensityResult d;
      if (kind == "product") {
        d = density_product(make_spectrum(pts), dens_ens.spec());
      } else {
        const std::vector<double> cnu = parse_number_list(dens_ens.nu);
        const int K = complex_K > 0 ? complex_K : static_cast<int>(cnu.size());
        d = density_complex_product(pts, static_cast<int>(pts.size()), K, cnu);
      }
      nlohmann::json j = {{"lambda", pts}, {"density", d.value}, {"log_density", d.log_value}, {"err", d.err}};
      emit(dens_common, json_text(j), out);
      return kExitOk;
    }

    if (*vhc) {
      set_default_workers(resolve_workers(hc_common.threads));
      const HCGroup g{parse_hc_kind(group), hc_size};
      const HCResult r = hc_compare(g, parse_number_list(hx), parse_number_list(hy), hc_common.samples,
                                    RngStream(hc_common.seed, 0));
      const TestReport rep = hc_report(g, r, hc_common.seed);
      return finish(hc_common, to_json(rep), rep.passed);
    }

    if (*vden) {
      set_default_workers(resolve_workers(vden_common.threads));
      const TestReport rep = density_ks(vden_ens.spec(), vden_common.samples, vden_common.seed, 0);
      return finish(vden_common, to_json(rep), rep.passed);
    }

    if (*vcor) {
      set_default_workers(resolve_workers(cor_common.threads));
      CorrespondenceConfig cfg;
      cfg.which = parse_correspondence_case(cor_case);
      cfg.m = cor_m;
      cfg.M = cor_M;
      cfg.nu = parse_number_list(cor_nu);
      cfg.n_samples = cor_common.samples;
      if (!cor_shapes.empty()) cfg.reference_shapes = parse_number_list(cor_shapes);
      const TestReport rep = correspondence_report(cfg, RngStream(cor_common.seed, 0));
      return finish(cor_common, to_json(rep), rep.passed);
    }

    if (*bcheck) {
      const BiorthCheck r = biorth_check(n_max, bi_M, parse_number_list(bi_nu));
      TestReport rep;
      rep.name = "biorth_M" + std::to_string(bi_M);
      rep.statistic = r.exact_max_dev;
      rep.threshold = 1e-12;
      rep.passed = r.exact_max_dev < 1e-12 && r.quadrature_consistent && r.solve_vs_contour_max_diff < 1e-6;
      auto rows = [](const RealMatrix& m) {
        std::vector<std::vector<double>> v(m.rows(), std::vector<double>(m.cols()));
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j) v[i][j] = m(i, j);
        return v;
      };
      rep.details = {{"nu", r.nu},
                     {"n_max", r.n_max},
                     {"exact", rows(r.exact)},
                     {"quadrature", rows(r.quadrature)},
                     {"quadrature_err", rows(r.quadrature_err)},
                     {"quadrature_max_dev", r.quadrature_max_dev},
                     {"quadrature_consistent", r.quadrature_consistent},
                     {"solve_vs_contour_max_diff", r.solve_vs_contour_max_diff}};
      return finish(bi_common, to_json(rep), rep.passed);
    }

    if (*heat) {
      HeatCheckConfig cfg;
      cfg.parity = parse_parity(heat_parity);
      cfg.m = heat_m;
      cfg.t = heat_t;
      cfg.h = heat_h;
      std::vector<TestReport> reps{heat_equation_check(cfg)};
      if (heat_m >= 2) reps.push_back(identity_W_check(heat_m, trials, RngStream(heat_common.seed, 0), cfg.parity));
      nlohmann::json j = nlohmann::json::array();
      bool passed = true;
      for (const auto& r : reps) {
        j.push_back(to_json(r));
        passed = passed && r.passed;
      }
      return finish(heat_common, j, passed);
    }

    if (*all) {
      SuiteOptions opt;
      opt.seed = all_common.seed;
      opt.workers = resolve_workers(all_common.threads);
      set_default_workers(opt.workers);
      const std::vector<SuiteEntry> entries = acceptance_suite(opt);
      return finish(all_common, suite_json(entries), suite_passed(entries));
    }
  } catch (const UsageError& e) {
    err << "rmt: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const InvalidSpec& e) {
    err << "rmt: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParams& e) {
    err << "rmt: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    err << "rmt: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateSpectrum& e) {
    err << "rmt: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedCase& e) {
    err << "rmt: unsupported: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "rmt: failed: " << e.what() << "\n";
    return kExitTestFailure;
  }
  return kExitUsage;
}

}  // namespace rmt
