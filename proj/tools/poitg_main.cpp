// Copyright 2026 The poitg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "poitg/dist.hpp"
#include "poitg/em.hpp"
#include "poitg/estimate.hpp"
#include "poitg/params.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// newline-separated non-negative integers; '#' comment lines ignored; a
// single-column CSV with header "count" also accepted
std::vector<long> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open input file");
  std::vector<long> counts;
  std::string line;
  long lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first_content && t == "count") {
      first_content = false;
      continue;
    }
    first_content = false;
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || value < 0) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected a non-negative integer, got \""
         << t << "\"";
      throw InputError(os.str());
    }
    counts.push_back(value);
  }
  if (counts.empty()) throw InputError(path + ": no observations found");
  return counts;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open output file");
  out << body;
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json fit_report(const poitg::FitResult& fit, long n) {
  const double k = 3.0;
  json se, ci;
  ci["level"] = fit.ci_level;
  const char* names[3] = {"lambda", "q", "alpha"};
  for (int j = 0; j < 3; ++j) {
    if (fit.ci_valid) {
      se[names[j]] = std::sqrt(fit.covariance(j, j));
      ci[names[j]] = {fit.ci[j].lower, fit.ci[j].upper};
    } else {
      se[names[j]] = nullptr;
      ci[names[j]] = nullptr;
    }
  }
  return json{
      {"model", "poitg"},
      {"n", n},
      {"method", fit.method == poitg::FitMethod::kMle ? "mle" : "em"},
      {"estimates",
       {{"lambda", fit.params.lambda()},
        {"q", fit.params.q()},
        {"alpha", fit.params.alpha()}}},
      {"se", se},
      {"ci", ci},
      {"loglik", fit.loglik},
      {"aic", 2.0 * k - 2.0 * fit.loglik},
      {"bic", k * std::log(static_cast<double>(n)) - 2.0 * fit.loglik},
      {"converged", fit.converged},
      {"iterations", fit.iterations},
  };
}

int run_fit(const std::string& input, const std::string& method, double tol,
            long max_iter, double ci_level, const std::string& output) {
  const poitg::CountData data(read_counts(input));
  poitg::FitResult fit = [&] {
    if (method == "em") {
      poitg::EmOptions opts;
      opts.eps = tol > 0 ? tol : opts.eps;
      if (max_iter > 0) opts.max_iter = max_iter;
      opts.ci_level = ci_level;
      return poitg::fit_em(data, opts).result;
    }
    poitg::FitOptions opts;
    if (tol > 0) opts.tol = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    opts.ci_level = ci_level;
    return poitg::fit_mle(data, opts);
  }();
  write_text(output, fit_report(fit, data.n()).dump(2) + "\n");
  return fit.converged ? kExitOk : kExitNoConvergence;
}

int run_eval(const poitg::Params& p, long y_max, const std::string& output) {
  const poitg::ReliabilityTable table = poitg::reliability_table(p, y_max);
  std::ostringstream os;
  os << "y,pmf,cdf,sf,hazard\n";
  for (long y = 0; y <= y_max; ++y) {
    os << y << ',' << format6(table.pmf[y]) << ',' << format6(table.cdf[y])
       << ',' << format6(table.sf[y]) << ',' << format6(table.hazard[y])
       << '\n';
  }
  write_text(output, os.str());
  return kExitOk;
}

int run_sample(const poitg::Params& p, long n, std::optional<long> seed,
               const std::string& output) {
  std::mt19937_64 rng(seed ? static_cast<std::uint64_t>(*seed)
                           : std::random_device{}());
  const poitg::CountData draws = poitg::sample(p, n, rng);
  std::ostringstream os;
  for (long y : draws.counts()) os << y << '\n';
  write_text(output, os.str());
  return kExitOk;
}

int run_summary(const poitg::Params& p, const std::string& output) {
  const poitg::MomentSet m = poitg::moments(p);
  const json report{
      {"model", "poitg"},
      {"lambda", p.lambda()},
      {"q", p.q()},
      {"alpha", p.alpha()},
      {"mean", m.mean},
      {"variance", m.variance},
      {"raw_moments",
       {{"mu1", m.raw[0]}, {"mu2", m.raw[1]}, {"mu3", m.raw[2]}, {"mu4", m.raw[3]}}},
      {"central_moments",
       {{"mu1", m.central[0]},
        {"mu2", m.central[1]},
        {"mu3", m.central[2]},
        {"mu4", m.central[3]}}},
      {"skewness", m.skewness},
      {"kurtosis", m.kurtosis},
      {"dispersion_index", m.dispersion_index},
      {"cv_percent", m.cv_percent},
  };
  write_text(output, report.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PoiTG count model: fit, evaluate, sample, summarize"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "fit parameters to a counts file");
  std::string fit_input, fit_method = "mle", fit_output;
  double fit_tol = -1.0, fit_ci = 0.95;
  long fit_max_iter = -1;
  fit->add_option("--input", fit_input, "counts file")->required();
  fit->add_option("--method", fit_method, "mle or em")
      ->check(CLI::IsMember({"mle", "em"}));
  fit->add_option("--tol", fit_tol, "convergence tolerance");
  fit->add_option("--max-iter", fit_max_iter, "iteration budget");
  fit->add_option("--ci", fit_ci, "confidence level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  fit->add_option("--output", fit_output, "report path (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "tabulate pmf/cdf/sf/hazard");
  double e_lambda = 0, e_q = 0, e_alpha = 0;
  long e_ymax = 20;
  std::string eval_output;
  eval->add_option("--lambda", e_lambda)->required();
  eval->add_option("--q", e_q)->required();
  eval->add_option("--alpha", e_alpha)->required();
  eval->add_option("--y-max", e_ymax, "largest y (default 20)");
  eval->add_option("--output", eval_output, "CSV path (default stdout)");

  // sample
  auto* smp = app.add_subcommand("sample", "draw pseudo-random counts");
  double s_lambda = 0, s_q = 0, s_alpha = 0;
  long s_n = 0;
  std::optional<long> s_seed;
  std::string sample_output;
  smp->add_option("--lambda", s_lambda)->required();
  smp->add_option("--q", s_q)->required();
  smp->add_option("--alpha", s_alpha)->required();
  smp->add_option("--n", s_n, "number of draws")->required();
  smp->add_option("--seed", s_seed, "RNG seed (unseeded: nondeterministic)");
  smp->add_option("--output", sample_output, "counts path (default stdout)");

  // summary
  auto* sum = app.add_subcommand("summary", "moments and shape summaries");
  double m_lambda = 0, m_q = 0, m_alpha = 0;
  std::string summary_output;
  sum->add_option("--lambda", m_lambda)->required();
  sum->add_option("--q", m_q)->required();
  sum->add_option("--alpha", m_alpha)->required();
  sum->add_option("--output", summary_output, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*fit) {
      return run_fit(fit_input, fit_method, fit_tol, fit_max_iter, fit_ci,
                     fit_output);
    }
    if (*eval) {
      if (e_ymax < 0) throw InputError("eval: --y-max must be >= 0");
      return run_eval(poitg::Params(e_lambda, e_q, e_alpha), e_ymax,
                      eval_output);
    }
    if (*smp) {
      if (s_n < 1) throw InputError("sample: --n must be >= 1");
      return run_sample(poitg::Params(s_lambda, s_q, s_alpha), s_n, s_seed,
                        sample_output);
    }
    if (*sum) {
      return run_summary(poitg::Params(m_lambda, m_q, m_alpha), summary_output);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
