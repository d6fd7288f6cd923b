#include "trg/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fstream>
#include <iostream>
#include <optional>

#include "trg/json_io.hpp"

namespace trg::cli {

namespace {

std::vector<double> split_reals(const std::string& csv, std::size_t count,
                                const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string tok = csv.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what) + ": expected a number, got '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != count)
    throw CLI::ValidationError(std::string(what) + ": expected " +
                               std::to_string(count) + " comma-separated values");
  return out;
}

std::vector<int> split_ints(const std::string& csv, std::size_t count, const char* what) {
  auto reals = split_reals(csv, count, what);
  std::vector<int> out;
  for (double r : reals) {
    const int i = static_cast<int>(r);
    if (static_cast<double>(i) != r)
      throw CLI::ValidationError(std::string(what) + ": expected an integer");
    out.push_back(i);
  }
  return out;
}

RepKind parse_kind(const std::string& kind) {
  if (kind == "diagonal") return RepKind::diagonal;
  if (kind == "symplectic") return RepKind::symplectic;
  if (kind == "sympower") return RepKind::sympower;
  throw CLI::ValidationError("--kind must be one of diagonal, symplectic, sympower");
}

json eigenvalues_json(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m);
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.push_back({{"re", es.eigenvalues()(i).real()},
                   {"im", es.eigenvalues()(i).imag()}});
  return out;
}

json cross_ratio_json(const CrossRatioClass& c) {
  return {{"endo", mat_to_json(c.endo)},
          {"charpoly", c.coeffs},
          {"eigenvalues", eigenvalues_json(c.endo)},
          {"scalar_deviation", scalar_deviation(c.endo)},
          {"scalar_value", c.endo.trace() / static_cast<double>(c.endo.rows())}};
}

json orders_json(const Rep& rep, const Tolerances& tol) {
  json out = json::object();
  const char* names[3][3] = {{"", "r1r2", "r1r3"}, {"", "", "r2r3"}, {"", "", ""}};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      auto got = projective_order(rep.r[i] * rep.r[j], 2 * rep.params.max_k(),
                                  tol.scalar_tol, tol);
      out[names[i][j]] = {{"expected", product_order(rep.params, i, j)},
                          {"computed", got ? json(*got) : json(nullptr)}};
    }
  return out;
}

struct Options {
  std::optional<std::vector<int>> k;
  int n = 1;
  std::string kind = "diagonal";
  std::optional<std::vector<int>> signature;
  std::optional<std::vector<double>> lambda;
  bool symmetric = false;
  int trials = 100;
  double magnitude = 1e-3;
  std::uint64_t seed = 0;
  std::string config_path;
};

TriangleParams require_k(const Options& opt) {
  if (!opt.k) throw CLI::ValidationError("--k k1,k2,k3 is required");
  return TriangleParams((*opt.k)[0], (*opt.k)[1], (*opt.k)[2]);
}

Rep build_from_options(const Options& opt, const Tolerances& tol) {
  const TriangleParams k = require_k(opt);
  const RepKind kind = parse_kind(opt.kind);
  std::optional<std::pair<int, int>> sig;
  if (opt.signature) sig = std::pair{(*opt.signature)[0], (*opt.signature)[1]};
  return build_rep(kind, k, opt.n, sig, tol);
}

json run_geom(const Options& opt, const Tolerances& tol) {
  const TriangleParams k = require_k(opt);
  const Rep rep = geometric_representation(k, tol);
  const auto classes = rep_cross_ratios(rep, tol);
  const auto lam = k.lambdas();
  const auto m = geometric_graph_scalars(k);
  const Mat gram = gram_matrix(k);
  return {{"cross_ratios",
           {classes[0].endo(0, 0), classes[1].endo(0, 0), classes[2].endo(0, 0)}},
          {"lambda_targets", {lam[0], lam[1], lam[2]}},
          {"graph_scalars", {m[0], m[1], m[2]}},
          {"phi", phi(lam[0], lam[1], lam[2])},
          {"gram_matrix", mat_to_json(gram)},
          {"gram_det", gram.determinant()},
          {"orders", orders_json(rep, tol)}};
}

json run_embed(const Options& opt, const Tolerances& tol) {
  const Rep rep = build_from_options(opt, tol);
  const auto classes = rep_cross_ratios(rep, tol);
  json cr = json::array();
  for (const auto& c : classes) cr.push_back(cross_ratio_json(c));
  json out = {{"rep", rep_summary_json(rep)},
              {"ambient_dim", static_cast<int>(rep.ambient_dim)},
              {"cross_ratios", std::move(cr)},
              {"orders", orders_json(rep, tol)},
              {"relation_residual", relation_residual(rep, tol)}};
  if (rep.kind == RepKind::symplectic) {
    const Mat omega = SymplecticSpace::from_signature(rep.signature->first,
                                                      rep.signature->second)
                          .omega;
    json anti = json::array();
    for (int i = 0; i < 3; ++i)
      anti.push_back(
          (rep.r[i].transpose() * omega * rep.r[i] + omega).norm());
    out["antisymplectic_residuals"] = std::move(anti);
  }
  return out;
}

json describe_config(const Config6Normal& c) {
  const auto classes = config_cross_ratios(c);
  json cr = json::array();
  json lambda = json::array();
  for (const auto& cls : classes) {
    cr.push_back(cross_ratio_json(cls));
    lambda.push_back(cls.endo.trace() / static_cast<double>(cls.endo.rows()));
  }
  return {{"config", config_to_json(c)},
          {"cross_ratios", std::move(cr)},
          {"lambda_recovered", std::move(lambda)}};
}

json run_invariants(const Options& opt, const Tolerances& tol) {
  if (opt.config_path.empty())
    throw CLI::ValidationError("--config PATH is required");
  std::ifstream in(opt.config_path);
  if (!in) throw error(errc::construction_failed,
                       "cannot open config file " + opt.config_path);
  json doc = json::parse(in, nullptr, true);

  // Accept a bare config object, an array, or the conf6 output envelope.
  json configs = json::array();
  if (doc.is_array()) configs = doc;
  else if (doc.contains("results") && doc["results"].contains("configs"))
    configs = doc["results"]["configs"];
  else if (doc.contains("configs")) configs = doc["configs"];
  else configs.push_back(doc);

  json out = json::array();
  for (const auto& cj : configs) {
    Config6Normal c = config_from_json(cj, tol);
    json d = describe_config(c);
    if (cj.contains("lambda")) d["lambda_target"] = cj["lambda"];
    out.push_back(std::move(d));
  }
  return {{"count", out.size()}, {"configs", std::move(out)}};
}

json run_conf6(const Options& opt, const Tolerances& tol) {
  if (!opt.lambda) throw CLI::ValidationError("--lambda l1,l2,l3 is required");
  const auto& l = *opt.lambda;
  auto sol = solve_scalar_config(l[0], l[1], l[2], opt.n, opt.symmetric, tol);
  json configs = json::array();
  for (const auto& c : sol.configs)
    configs.push_back(config_to_json(c, std::array{l[0], l[1], l[2]}));
  return {{"enumerated_classes", sol.enumerated},
          {"emitted", sol.configs.size()},
          {"configs", std::move(configs)}};
}

json run_maslov(const Options& opt, const Tolerances& tol) {
  if (!opt.signature) throw CLI::ValidationError("--signature p,q is required");
  Options sopt = opt;
  sopt.kind = "symplectic";
  const Rep rep = build_from_options(sopt, tol);
  const SymplecticSpace v = SymplecticSpace::from_signature(
      rep.signature->first, rep.signature->second);
  const MaslovData data = maslov(rep.u_plus[0], rep.u_plus[1], rep.u_plus[2], v, tol);
  const PQCircle circle = pq_circle(rep.u_plus[0], rep.u_plus[1], rep.u_plus[2], v, tol);
  return {{"rep", rep_summary_json(rep)},
          {"maslov_form", mat_to_json(data.form)},
          {"maslov_signature", {data.signature.first, data.signature.second}},
          {"circle_signature", {circle.signature.first, circle.signature.second}}};
}

json run_probe(const Options& opt, const Tolerances& tol) {
  const Rep rep = build_from_options(opt, tol);
  ProbeParams params;
  params.trials = opt.trials;
  params.magnitude = opt.magnitude;
  params.seed = opt.seed;
  params.relation_tol = tol.relation_tol;
  params.conj_tol = tol.conj_tol;
  params.validate();
  const ProbeReport report = rigidity_probe(rep, params, tol);
  return probe_report_json(rep, params, report);
}

json run_expected_dim(const Options& opt) {
  if (opt.n < 1) throw error(errc::dimension_mismatch, "--n must be >= 1");
  return {{"expected_dimension", expected_dimension_diagonal(opt.n)}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Triangle reflection groups: cross-ratio invariants, finite "
               "configuration spaces and local-rigidity probes"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string tol_file, out_path;
  app.add_option("--tol-file", tol_file, "JSON file with tolerance overrides");
  app.add_option("--out", out_path, "write the JSON output to a file");

  Options opt;
  std::string k_csv, sig_csv, lambda_csv;

  auto add_k = [&](CLI::App* cmd) { cmd->add_option("--k", k_csv, "k1,k2,k3"); };
  auto add_n = [&](CLI::App* cmd) { cmd->add_option("--n", opt.n, "half-dimension n"); };

  CLI::App* geom = app.add_subcommand("geom", "geometric representation in dimension 2");
  add_k(geom);

  CLI::App* embed = app.add_subcommand("embed", "embedded representation in dimension 2n");
  add_k(embed);
  add_n(embed);
  embed->add_option("--kind", opt.kind, "diagonal | symplectic | sympower");
  embed->add_option("--signature", sig_csv, "p,q (symplectic kind)");

  CLI::App* invariants = app.add_subcommand("invariants", "cross-ratios of stored configurations");
  invariants->add_option("--config", opt.config_path, "configuration JSON file");

  CLI::App* conf6 = app.add_subcommand("conf6", "enumerate scalar-target configurations");
  conf6->add_option("--lambda", lambda_csv, "l1,l2,l3 scalar cross-ratio targets");
  add_n(conf6);
  conf6->add_flag("--symmetric", opt.symmetric, "Lagrangian (symmetric) variant");

  CLI::App* maslov_cmd = app.add_subcommand("maslov", "Maslov data of the eigenspace triple");
  add_k(maslov_cmd);
  add_n(maslov_cmd);
  maslov_cmd->add_option("--signature", sig_csv, "p,q");

  CLI::App* probe = app.add_subcommand("probe", "perturb-project-compare rigidity probe");
  add_k(probe);
  add_n(probe);
  probe->add_option("--kind", opt.kind, "diagonal | symplectic | sympower");
  probe->add_option("--signature", sig_csv, "p,q (symplectic kind)");
  probe->add_option("--trials", opt.trials, "number of trials");
  probe->add_option("--magnitude", opt.magnitude, "perturbation size");
  probe->add_option("--seed", opt.seed, "base seed");

  CLI::App* expected = app.add_subcommand("expected-dim", "expected dimension of the diagonal component");
  add_n(expected);

  json inputs;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (!k_csv.empty()) {
      auto k = split_ints(k_csv, 3, "--k");
      opt.k = k;
      inputs["k"] = k;
    }
    if (!sig_csv.empty()) {
      auto s = split_ints(sig_csv, 2, "--signature");
      opt.signature = s;
      inputs["signature"] = s;
    }
    if (!lambda_csv.empty()) {
      auto l = split_reals(lambda_csv, 3, "--lambda");
      opt.lambda = l;
      inputs["lambda"] = l;
    }

    Tolerances tol;
    if (!tol_file.empty()) {
      std::ifstream in(tol_file);
      if (!in)
        throw error(errc::construction_failed, "cannot open tolerance file " + tol_file);
      tol = tolerances_from_json(json::parse(in));
      inputs["tol_file"] = tol_file;
    }

    json results;
    std::string command;
    if (geom->parsed()) {
      command = "geom";
      results = run_geom(opt, tol);
    } else if (embed->parsed()) {
      command = "embed";
      inputs["kind"] = opt.kind;
      inputs["n"] = opt.n;
      results = run_embed(opt, tol);
    } else if (invariants->parsed()) {
      command = "invariants";
      inputs["config"] = opt.config_path;
      results = run_invariants(opt, tol);
    } else if (conf6->parsed()) {
      command = "conf6";
      inputs["n"] = opt.n;
      inputs["symmetric"] = opt.symmetric;
      results = run_conf6(opt, tol);
    } else if (maslov_cmd->parsed()) {
      command = "maslov";
      inputs["n"] = opt.n;
      results = run_maslov(opt, tol);
    } else if (probe->parsed()) {
      command = "probe";
      inputs["kind"] = opt.kind;
      inputs["n"] = opt.n;
      inputs["trials"] = opt.trials;
      inputs["magnitude"] = opt.magnitude;
      inputs["seed"] = opt.seed;
      results = run_probe(opt, tol);
    } else if (expected->parsed()) {
      command = "expected-dim";
      inputs["n"] = opt.n;
      results = run_expected_dim(opt);
    }
    inputs["command"] = command;

    const json envelope = {{"inputs", inputs},
                           {"results", results},
                           {"tolerances", tolerances_to_json(tol)}};
    const std::string text = envelope.dump(2) + "\n";
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file)
        throw error(errc::construction_failed, "cannot write to " + out_path);
      file << text;
    } else {
      out << text;
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const error& e) {
    const json failure = {{"error", e.name()}, {"detail", e.detail()}};
    out << failure.dump(2) << "\n";
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    const json failure = {{"error", "Internal"}, {"detail", e.what()}};
    out << failure.dump(2) << "\n";
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace trg::cli
