// Command-line driver: hopdam <check>... [options]

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopdam/hopdam.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::logic_error&) {
      throw hopdam::usage_error("--lambda: cannot parse '" + tok + "'");
    }
    if (pos != tok.size()) throw hopdam::usage_error("--lambda: cannot parse '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw hopdam::usage_error("--lambda: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heckman-Opdam hypergeometric function and Selberg-type integral checks"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(hopdam::kVersion));

  std::vector<std::string> names;
  hopdam::CheckRequest req;
  double k_re = req.k.real(), k_im = req.k.imag();
  std::string lambda, format = "json";
  double tol = 0.0, quad_tol = 0.0;

  app.add_option("checks", names, "roots, series-check, transform-check, opdam-check, coeff, rhs, selberg, eigen-check, exponent-check or all");
  app.add_option("--n", req.n, "rank (1..8)");
  app.add_option("--k-re", k_re, "real part of k");
  app.add_option("--k-im", k_im, "imaginary part of k");
  app.add_option("--lambda", lambda, "comma list of n+1 coordinates (use --lambda=-1,1 for a leading minus)");
  app.add_option("--order", req.order, "series order N");
  auto* tol_opt = app.add_option("--tol", tol, "pass tolerance (check default otherwise)");
  auto* quad_opt = app.add_option("--quad-tol", quad_tol, "relative quadrature tolerance");
  app.add_option("--h", req.h, "finite-difference step in log z");
  app.add_option("--seed", req.seed, "seed of the randomized draws");
  app.add_option("--jobs", req.jobs, "worker threads");
  app.add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--w", req.w, "Weyl element: e, all or a 1-based permutation such as 2,1,3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    req.k = {k_re, k_im};
    if (!lambda.empty()) req.lambda = parse_list(lambda);
    if (*tol_opt) req.tol = tol;
    if (*quad_opt) req.quad_tol = quad_tol;
    req.format = format == "csv" ? hopdam::OutputFormat::csv : format == "text" ? hopdam::OutputFormat::text : hopdam::OutputFormat::json;

    const hopdam::SuiteResult suite = hopdam::run_suite(names, req);
    for (const auto& w : suite.warnings) std::cerr << "warning: " << w << "\n";

    const bool single = suite.reports.size() == 1 && names.size() == 1 && names[0] != "all";
    switch (req.format) {
      case hopdam::OutputFormat::json:
        if (single)
          std::cout << hopdam::to_json(suite.reports[0]).dump(2) << "\n";
        else
          std::cout << hopdam::to_json(suite).dump(2) << "\n";
        break;
      case hopdam::OutputFormat::csv:
        std::cout << hopdam::kCsvHeader << "\n";
        for (const auto& r : suite.reports) std::cout << hopdam::to_csv_rows(r);
        break;
      case hopdam::OutputFormat::text:
        for (const auto& r : suite.reports) std::cout << hopdam::to_text(r);
        if (!single)
          std::cout << "summary: " << suite.passed << " pass, " << suite.failed << " fail, " << suite.skipped << " skip\n";
        break;
    }
    return suite.ok() ? 0 : 1;
  } catch (const hopdam::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
}
