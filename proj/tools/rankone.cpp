// rankone: command-line front end for the rankone library.

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rankone/classify.hpp"
#include "rankone/error.hpp"
#include "rankone/gbs.hpp"
#include "rankone/hnn.hpp"
#include "rankone/homology.hpp"
#include "rankone/presentation.hpp"
#include "rankone/report.hpp"

namespace {

using namespace rankone;

enum Exit : int {
  ok = 0,
  parse_failure = 2,
  precondition = 3,
  certification = 4,
  budget = 5,
};

struct RunConfig {
  std::string command;
  std::string hnn_mode;
  std::vector<std::string> paths;
  std::size_t max_index = 12;
  std::vector<unsigned long long> primes;
  long long budget_ms = 60000;
  std::string format = "text";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool strict = false;

  json to_json() const {
    return {{"max_index", max_index},
            {"primes", primes.empty() ? json("default") : json(primes)},
            {"budget_ms", budget_ms},
            {"format", format},
            {"jobs", jobs},
            {"seed", seed},
            {"strict", strict}};
  }
};

struct Result {
  json data = json::object();
  std::string text;
  int code = Exit::ok;
};

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path, 0, 0);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

Deadline deadline_of(RunConfig const& cfg) {
  return Deadline::after(std::chrono::milliseconds(cfg.budget_ms));
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string torsion_text(json const& inv) {
  std::string s = "Z^" + std::to_string(inv["betti"].get<std::size_t>());
  for (auto const& t : inv["torsion"]) {
    s += " + Z/" + (t.is_string() ? t.get<std::string>() : t.dump());
  }
  return s;
}

std::string table_text(json const& t) {
  std::string s;
  for (auto const& [name, row] : t["action"].items()) {
    s += "    " + name + ":";
    for (auto const& c : row) {
      s += " " + c.dump();
    }
    s += "\n";
  }
  return s;
}

Result cmd_analyze(std::string const& path, RunConfig const& cfg) {
  Result r;
  std::vector<std::string> warnings;
  Presentation p = parse_presentation(read_file(path), &warnings);
  auto inv = h1(p);
  auto primes = cfg.primes.empty() ? default_primes(inv) : cfg.primes;
  HomologyReport rep = homology_report(p, primes);
  r.data = {{"presentation", to_json(p)},
            {"warnings", warnings},
            {"homology", to_json(rep)}};
  json const& h = r.data["homology"];
  std::ostringstream os;
  for (auto const& w : warnings) {
    os << "warning: " << w << "\n";
  }
  os << "presentation: " << format_presentation(p) << "\n"
     << "deficiency: " << h["deficiency"].get<long long>() << "\n"
     << "H1: " << torsion_text(h) << "\n"
     << "p\td_p\tGS violated\n";
  for (auto const& row : h["per_prime"]) {
    os << row["p"].get<unsigned long long>() << "\t"
       << row["d_p"].get<std::size_t>() << "\t"
       << (h["deficiency"].get<long long>() >= 1
               ? yes_no(row["gs_violated"].get<bool>())
               : std::string("n/a"))
       << "\n";
  }
  r.text = os.str();
  return r;
}

std::string search_text(json const& s) {
  std::ostringstream os;
  if (s["found"].get<bool>()) {
    json const& w = s["witness"];
    os << "witness: index " << w["index"].get<std::size_t>() << ", prime "
       << w["prime"].get<unsigned long long>() << ", rank "
       << w["rank"].get<std::size_t>() << "\n"
       << "  subgroup generated by";
    for (auto const& g : w["subgroup"]["subgroup_generators"]) {
      os << " " << g.get<std::string>() << ";";
    }
    os << "\n  coset action (1-based):\n" << table_text(w["subgroup"]);
  } else {
    os << "exhausted: no witness up to index "
       << s["searched_index"].get<std::size_t>() << " (largest rank seen "
       << s["best_rank"].get<std::size_t>() << ", "
       << s["subgroups_examined"].get<std::size_t>()
       << " subgroups examined)";
    if (s["budget_exhausted"].get<bool>()) {
      os << "; wall-clock budget exhausted";
    }
    os << "\n";
  }
  return os.str();
}

Result cmd_vsa(std::string const& path, RunConfig const& cfg) {
  Result r;
  Presentation p = parse_presentation(read_file(path));
  VsaSearchOptions o;
  o.max_index = cfg.max_index;
  o.primes = cfg.primes;
  o.deadline = deadline_of(cfg);
  auto t0 = std::chrono::steady_clock::now();
  VsaSearchResult res = vsa_search_report(p, o);
  r.data = {{"search", to_json(res)},
            {"timings", {{"vsa_search", ms_since(t0)}}}};
  r.text = search_text(r.data["search"]);
  if (res.budget_exhausted && cfg.strict) {
    r.code = Exit::budget;
  }
  return r;
}

Endomorphism load_endomorphism(std::string const& path) {
  std::string text = read_file(path);
  try {
    return parse_endomorphism(text);
  } catch (PreconditionError const& e) {
    throw CertificationError(std::string("injectivity not certified: ")
                             + e.what());
  }
}

Result cmd_hnn(std::string const& path, RunConfig const& cfg) {
  Result r;
  Endomorphism theta = load_endomorphism(path);
  std::ostringstream os;
  r.data["endomorphism"] = to_json(theta);
  if (cfg.hnn_mode == "build") {
    Presentation p = hnn_presentation(theta);
    r.data["presentation"] = to_json(p);
    r.data["surjective"] = is_surjective(theta);
    os << "presentation: " << format_presentation(p) << "\n"
       << "surjective: " << yes_no(is_surjective(theta)) << "\n";
    r.text = os.str();
    return r;
  }
  PeriodicSearch ps;
  ps.deadline = deadline_of(cfg);
  auto t0 = std::chrono::steady_clock::now();
  std::optional<PeriodicWitness> wit;
  try {
    wit = find_periodic_conjugacy(theta, ps);
  } catch (BudgetExhausted const&) {
    r.data["periodic"] = "budget-exhausted";
    r.text = "periodic search: wall-clock budget exhausted\n";
    r.code = cfg.strict ? Exit::budget : Exit::ok;
    return r;
  }
  r.data["timings"]["periodic"] = ms_since(t0);
  if (!wit) {
    r.data["periodic"] = "none-within-bounds";
    os << "periodic: none-within-bounds (i <= " << ps.max_i << ", |x| <= "
       << ps.max_len << ", |d| >= " << ps.min_abs_d << ")\n";
    r.text = os.str();
    return r;
  }
  r.data["periodic"] = to_json(theta, *wit);
  Alphabet const& a = theta.alphabet();
  os << "periodic: theta^" << wit->i << "(" << format_word(wit->x, a)
     << ") = g x^" << wit->d << " g^-1 with g = " << format_word(wit->g, a)
     << "\n";
  if (cfg.hnn_mode == "periodic") {
    r.text = os.str();
    return r;
  }
  if (cfg.hnn_mode == "primitive") {
    NormalizedPair np = normalize(theta, *wit);
    PrimitivityCertificate cert = prove_primitive(np);
    if (!verify(np, cert)) {
      throw CertificationError("primitivity certificate does not replay");
    }
    r.data["normalized"] = {{"theta_prime", to_json(np.theta_prime)},
                            {"w", format_word(np.w, a)},
                            {"d", np.d}};
    r.data["certificate"] = to_json(cert);
    os << "normalized: theta'(w) = w^" << np.d << " with w = "
       << format_word(np.w, a) << "\n"
       << "primitive: yes (rank chain of length " << cert.chain.size()
       << ", certificate replays)\n";
    r.text = os.str();
    return r;
  }
  StrictWitnessOptions so;
  so.max_index = cfg.max_index;
  so.deadline = ps.deadline;
  try {
    auto t1 = std::chrono::steady_clock::now();
    StrictWitness sw = vsa_witness_strict(theta, *wit, so);
    r.data["timings"]["strict_witness"] = ms_since(t1);
    r.data["witness"] = to_json(sw);
    json const& w = r.data["witness"];
    os << "witness: index " << w["subgroup"]["index"].get<std::size_t>()
       << ", prime " << w["p"].get<unsigned long long>() << ", rank "
       << w["rank"].get<std::size_t>() << "\n"
       << "presentation: " << w["presentation"]["text"].get<std::string>()
       << "\n"
       << "Golod-Shafarevich violated: "
       << yes_no(w["golod_shafarevich"]["gs_violated"].get<bool>()) << "\n"
       << "  coset action (1-based):\n"
       << table_text(w["subgroup"]);
  } catch (BudgetExhausted const& e) {
    r.data["witness"] = nullptr;
    r.data["budget"] = e.what();
    os << "witness: " << e.what() << "\n";
    r.code = cfg.strict ? Exit::budget : Exit::ok;
  }
  r.text = os.str();
  return r;
}

Result cmd_gbs(std::string const& path, RunConfig const&) {
  Result r;
  GbsGraph g = parse_gbs(read_file(path));
  GbsReduction red = reduce_gbs(g);
  GbsVerdict gv = classify_gbs(red.graph);
  auto circle = circle_criterion(red.graph);
  std::ostringstream os;
  r.data = {{"graph", to_json(g)},
            {"reduced", to_json(red.graph)},
            {"reduction_trace", red.trace},
            {"verdict", to_json(gv)}};
  os << "reduced graph:\n" << format_gbs(red.graph);
  for (auto const& line : red.trace) {
    os << "  " << line << "\n";
  }
  os << "verdict: " << to_string(gv.kind)
     << ", not acylindrically hyperbolic\n  " << gv.reason << "\n";
  std::string label = std::string(to_string(gv.kind));
  if (circle) {
    r.data["circle"] = to_json(*circle);
    os << "circle: n = " << circle->n << ", L = " << circle->lprod
       << ", R = " << circle->rprod
       << ", coprime = " << yes_no(circle->coprime) << "\n";
    Presentation cp = circle_presentation(*circle);
    r.data["circle_presentation"] = to_json(cp);
    os << "presentation: " << format_presentation(cp) << "\n";
    if (circle->coprime) {
      QuotientRelation q = quotient_relation(*circle);
      r.data["quotient_relation"] = to_json(q);
      os << "relation: " << format_word(q.relation, q.alphabet) << "\n";
      for (auto const& d : q.derivation) {
        os << "  " << d << "\n";
      }
      os << q.conclusion << "\n";
      if (circle->n >= 2) {
        TwoGeneratorReduction tg = two_generator_reduction(*circle);
        r.data["two_generator"] = to_json(tg);
        for (auto const& t : tg.trace) {
          os << "  " << t << "\n";
        }
        os << "two-generator presentation: "
           << format_presentation(tg.presentation) << "\n";
      }
      if (gv.kind == GbsVerdict::Kind::infinite_dim_h2b) {
        label = "GBS-exception";
      }
    }
  }
  r.data["label"] = label;
  os << "label: " << label << "\n";
  r.text = os.str();
  return r;
}

Result cmd_classify(std::string const& path, RunConfig const& cfg) {
  Result r;
  Presentation p = parse_presentation(read_file(path));
  ClassifyBudgets b;
  b.max_index = cfg.max_index;
  b.primes = cfg.primes;
  b.budget_ms = cfg.budget_ms;
  Verdict v = classify_presentation(p, b);
  BoundedGeneration bg = bounded_generation_verdict(v);
  r.data = {{"presentation", to_json(p)},
            {"verdict", to_json(v)},
            {"bounded_generation", to_json(bg)}};
  std::ostringstream os;
  os << "presentation: " << format_presentation(p) << "\n"
     << "label: " << to_string(v.label) << "\n";
  for (auto const& c : v.certificates) {
    os << "  [" << c.kind << "] " << c.statement << "\n";
  }
  os << "citations:";
  for (auto const& c : v.citations) {
    os << " " << c;
  }
  os << "\nbounded generation: " << to_string(bg.answer) << " (" << bg.reason
     << ")\n";
  r.text = os.str();
  bool exhausted = std::any_of(
      v.certificates.begin(), v.certificates.end(), [](Certificate const& c) {
        return c.data.is_object() && c.data.value("budget_exhausted", false);
      });
  if (exhausted && cfg.strict) {
    r.code = Exit::budget;
  }
  return r;
}

Result run_one(std::string const& path, RunConfig const& cfg) {
  Result r;
  auto fail = [&](int code, std::string kind, std::string const& msg) {
    r.code = code;
    r.data = {{"error", {{"kind", kind}, {"message", msg}}}};
    r.text = "error: " + msg + "\n";
  };
  try {
    if (cfg.command == "analyze") {
      r = cmd_analyze(path, cfg);
    } else if (cfg.command == "vsa") {
      r = cmd_vsa(path, cfg);
    } else if (cfg.command == "hnn") {
      r = cmd_hnn(path, cfg);
    } else if (cfg.command == "gbs") {
      r = cmd_gbs(path, cfg);
    } else {
      r = cmd_classify(path, cfg);
    }
  } catch (ParseError const& e) {
    fail(Exit::parse_failure, "parse", path + ":" + e.what());
  } catch (PreconditionError const& e) {
    fail(Exit::precondition, "precondition", e.what());
  } catch (CertificationError const& e) {
    fail(Exit::certification, "certification", e.what());
  } catch (BudgetExhausted const& e) {
    fail(cfg.strict ? Exit::budget : Exit::ok, "budget", e.what());
  }
  r.data["file"] = path;
  r.data["exit_code"] = r.code;
  return r;
}

std::vector<unsigned long long> parse_primes(std::string const& s) {
  std::vector<unsigned long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    std::size_t used = 0;
    unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) {
      throw CLI::ValidationError("--primes", "not an integer: " + item);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rankone: rank-1 phenomena in deficiency-one and one-relator "
               "groups"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string primes;
  app.add_option("--max-index", cfg.max_index, "largest subgroup index searched")
      ->check(CLI::PositiveNumber);
  app.add_option("--primes", primes, "comma-separated primes (default: <= 97 "
                                     "and the torsion primes)");
  app.add_option("--budget-ms", cfg.budget_ms, "wall-clock budget per input")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", cfg.jobs, "inputs processed in parallel")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed recorded in every report");
  app.add_flag("--strict", cfg.strict, "exit 5 when a budget runs out");

  auto* analyze = app.add_subcommand("analyze", "homology and Golod-Shafarevich");
  analyze->add_option("files", cfg.paths, ".fp files")->required();
  auto* vsa = app.add_subcommand("vsa", "search for a VSA witness");
  vsa->add_option("files", cfg.paths, ".fp files")->required();
  auto* hnn = app.add_subcommand("hnn", "ascending HNN extensions");
  hnn->add_option("mode", cfg.hnn_mode, "build, periodic, primitive or witness")
      ->required()
      ->check(CLI::IsMember({"build", "periodic", "primitive", "witness"}));
  hnn->add_option("files", cfg.paths, ".endo files")->required();
  auto* gbs = app.add_subcommand("gbs", "generalized Baumslag-Solitar graphs");
  gbs->add_option("files", cfg.paths, ".gbs files")->required();
  auto* classify = app.add_subcommand("classify", "verdict pipeline");
  classify->add_option("files", cfg.paths, ".fp files")->required();
  for (auto* sub : {analyze, vsa, hnn, gbs, classify}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
    cfg.primes = parse_primes(primes);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? 0 : Exit::parse_failure;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::parse_failure;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  std::vector<Result> results(cfg.paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.paths.size(); i = next++) {
      results[i] = run_one(cfg.paths[i], cfg);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::min(cfg.jobs, cfg.paths.size()); ++j) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }

  int code = Exit::ok;
  for (auto const& r : results) {
    if (code == Exit::ok && r.code != Exit::ok) {
      code = r.code;
    }
  }
  if (cfg.format == "json") {
    json out = {{"command", cfg.command},
                {"seed", cfg.seed},
                {"config", cfg.to_json()},
                {"results", json::array()}};
    if (cfg.command == "hnn") {
      out["mode"] = cfg.hnn_mode;
    }
    for (auto const& r : results) {
      out["results"].push_back(r.data);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "seed: " << cfg.seed << "\n";
    for (auto const& r : results) {
      std::cout << "== " << r.data["file"].get<std::string>() << "\n";
      (r.code == Exit::ok ? std::cout : std::cerr) << r.text;
    }
  }
  return code;
}
