// Batch front end: classify, density, iso, recognize, deconjugate.
// Exit codes: 0 positive verdict, 1 negative verdict, 2 error or not applicable.

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bbiso/abelian.hpp"
#include "bbiso/group_io.hpp"
#include "bbiso/metacyclic.hpp"
#include "bbiso/oracle.hpp"
#include "bbiso/order_analysis.hpp"

using namespace bbiso;
using nlohmann::json;

namespace {

struct RunConfig {
  u64 seed = 1;
  double epsilon = 1.0 / (1 << 20);
  std::optional<double> threshold;
  std::size_t enumeration_bound = kDefaultEnumerationBound;
  std::string order_factors;
  std::string log = "log2ln";
  bool json = false;
};

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LogConvention convention(const RunConfig& cfg) {
  if (cfg.log == "natural") return LogConvention::natural;
  return LogConvention::log2_of_ln;
}

u64 parse_count(const std::string& s) {
  // 1000, 10^6, 1e6
  auto digits = [](const std::string& t) {
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw CliError("malformed integer '" + t + "'");
    try {
      return static_cast<u64>(std::stoull(t));
    } catch (const std::out_of_range&) {
      throw CliError("integer out of range '" + t + "'");
    }
  };
  for (const char* sep : {"^", "e", "E"}) {
    auto pos = s.find(sep);
    if (pos == std::string::npos) continue;
    u64 base = digits(s.substr(0, pos));
    u64 exp = digits(s.substr(pos + 1));
    if (std::string(sep) != "^" && base == 0) throw CliError("malformed integer '" + s + "'");
    u64 scale = std::string(sep) == "^" ? base : 10;
    u64 out = std::string(sep) == "^" ? 1 : base;
    try {
      for (u64 i = 0; i < exp; ++i) out = checked_mul(out, scale);
    } catch (const std::overflow_error&) {
      throw CliError("integer out of range '" + s + "'");
    }
    return out;
  }
  return digits(s);
}

std::optional<FactoredInteger> parse_order_factors(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<PrimePower> f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw CliError("--order-factors entries are p:e");
    f.push_back({parse_count(item.substr(0, colon)), static_cast<unsigned>(parse_count(item.substr(colon + 1)))});
  }
  try {
    return FactoredInteger::from_factors(f);
  } catch (const std::invalid_argument& e) {
    throw CliError(std::string("--order-factors: ") + e.what());
  }
}

// Declared order, else --order-factors, else enumeration.
FactoredInteger order_of(const GroupHandle& g, const RunConfig& cfg) {
  if (auto f = parse_order_factors(cfg.order_factors)) return *f;
  if (g.known_order()) return *g.known_order();
  return factorize(enumerate_span(g, g.generators(), cfg.enumeration_bound).size());
}

void print(const RunConfig& cfg, const json& doc, const std::string& line) {
  if (cfg.json)
    std::cout << doc.dump() << "\n";
  else
    std::cout << line << "\n";
}

int cmd_classify(const std::string& arg, const RunConfig& cfg) {
  u64 n = parse_count(arg);
  if (n == 0) throw CliError("n must be positive");
  auto c = classify_order(n, cfg.threshold, convention(cfg));
  unsigned m = mu(factorize(n));
  json doc = {{"n", n},           {"threshold", c.threshold},
              {"a", c.small_part.value()}, {"b", c.big_part.value()},
              {"pseudo_square_free", c.pseudo_square_free}, {"two_threshold_free", c.two_threshold_free},
              {"separable", c.separable}, {"in_D", c.in_D},
              {"in_Dhat", c.in_Dhat},     {"mu", m}};
  std::ostringstream line;
  line << "n=" << n << " threshold=" << c.threshold << " a=" << c.small_part.value()
       << " b=" << c.big_part.value() << " in_D=" << (c.in_D ? "true" : "false")
       << " in_Dhat=" << (c.in_Dhat ? "true" : "false") << " mu=" << m;
  print(cfg, doc, line.str());
  return 0;
}

int cmd_density(const std::string& set_name, const std::string& limit_text, int threads, const RunConfig& cfg) {
  OrderSet set;
  if (set_name == "d" || set_name == "D")
    set = OrderSet::D;
  else if (set_name == "dhat" || set_name == "Dhat")
    set = OrderSet::Dhat;
  else
    throw CliError("--set must be d or dhat");
  if (!limit_text.empty() && limit_text[0] == '-') throw CliError("limit must be positive");
  u64 limit = parse_count(limit_text);
  if (limit == 0) throw CliError("limit must be positive");
  auto t0 = std::chrono::steady_clock::now();
  auto r = density_scan(set, limit, threads, convention(cfg));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", r.density());
  json doc = {{"set", set == OrderSet::D ? "D" : "Dhat"}, {"limit", limit}, {"count", r.count},
              {"density", r.density()}, {"seconds", secs}};
  print(cfg, doc, std::string(set == OrderSet::D ? "D" : "Dhat") + " density up to " + std::to_string(limit) +
                      ": " + buf + " (" + std::to_string(r.count) + " orders)");
  return 0;
}

int cmd_iso(const std::string& mode, const std::string& f1, const std::string& f2, const RunConfig& cfg) {
  GroupHandle g = load_group_file(f1);
  GroupHandle h = load_group_file(f2);
  FactoredInteger n = order_of(g, cfg);
  FactoredInteger m = order_of(h, cfg);
  if (!(n == m)) throw CliError("order mismatch: " + n.to_string() + " vs " + m.to_string());
  bool verdict;
  if (mode == "abelian") {
    double c = cfg.threshold ? *cfg.threshold : default_threshold(n.value(), convention(cfg));
    verdict = iso_abelian(g, h, n, c, true);
  } else if (mode == "metacyclic") {
    Rng rng(cfg.seed);
    verdict = iso_metacyclic(g, h, n, cfg.threshold, rng, LasVegasBudget{cfg.epsilon, 1});
  } else if (mode == "bruteforce") {
    std::size_t bound = std::min(cfg.enumeration_bound, static_cast<std::size_t>(n.value()));
    verdict = brute_force_iso(enumerate(g, bound), enumerate(h, bound));
  } else {
    throw CliError("--mode must be abelian, metacyclic or bruteforce");
  }
  json doc = {{"mode", mode}, {"order", n.value()}, {"isomorphic", verdict}};
  print(cfg, doc, verdict ? "isomorphic" : "not isomorphic");
  return verdict ? 0 : 1;
}

int cmd_recognize(const std::string& file, const RunConfig& cfg) {
  GroupHandle g = load_group_file(file);
  FactoredInteger n = order_of(g, cfg);
  Rng rng(cfg.seed);
  auto r = recognize_coprime_metacyclic(g, n, cfg.threshold, rng, LasVegasBudget{cfg.epsilon, 1});
  if (auto* no = std::get_if<NotMetacyclic>(&r)) {
    if (no->reason == RefusalReason::las_vegas_exhausted) throw LasVegasExhausted(no->detail);
    json doc = {{"order", n.value()}, {"coprime_metacyclic", false}, {"reason", to_string(no->reason)},
                {"detail", no->detail}};
    print(cfg, doc, "not coprime meta-cyclic: " + to_string(no->reason) + " (" + no->detail + ")");
    return 1;
  }
  const auto& dec = std::get<MetacyclicDecomposition>(r);
  json doc = {{"order", n.value()}, {"coprime_metacyclic", true}, {"c", dec.c.value()}, {"d", dec.d.value()},
              {"v", dec.action_v}, {"u", g.backend().format(dec.u_generator)},
              {"k", g.backend().format(dec.k_generator)}};
  print(cfg, doc,
        "coprime meta-cyclic: c=" + std::to_string(dec.c.value()) + " d=" + std::to_string(dec.d.value()) +
            " v=" + std::to_string(dec.action_v));
  return 0;
}

int cmd_deconjugate(const std::string& file, const RunConfig& cfg) {
  GroupHandle g = load_group_file(file);
  if (g.generators().size() != 2) throw CliError("deconjugate needs exactly two generators x, y");
  FactoredInteger n = order_of(g, cfg);
  const Element& x = g.generators()[0];
  const Element& y = g.generators()[1];
  FactoredInteger a = element_order(g, x, n);
  FactoredInteger b = element_order(g, y, n);
  if (!gcd(a, b).is_one()) throw CliError("orders of x and y are not coprime");
  Rng rng(cfg.seed);
  u64 v = deconjugate(g, x, y, a, b, rng, LasVegasBudget{cfg.epsilon, 1});
  if (!g.equal(g.conjugate(y, x), g.power(y, v))) throw PreconditionViolation("y^x is not a power of y");
  json doc = {{"a", a.value()}, {"b", b.value()}, {"v", v}};
  print(cfg, doc, std::to_string(v));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box isomorphism tests for groups of dense orders"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--epsilon", cfg.epsilon, "failure budget")->check(CLI::Range(0.0, 1.0));
  app.add_option("--threshold", cfg.threshold, "small/big prime threshold");
  app.add_option("--enumeration-bound", cfg.enumeration_bound, "cap for element enumeration");
  app.add_option("--order-factors", cfg.order_factors, "factored order p:e,p:e,...");
  app.add_option("--log", cfg.log, "threshold convention")->check(CLI::IsMember({"log2ln", "natural"}));
  app.add_flag("--json", cfg.json, "machine-readable output");

  std::string n_arg;
  auto* classify = app.add_subcommand("classify", "classify a group order");
  classify->add_option("n", n_arg)->required();

  std::string set_name = "d", limit_text;
  int threads = 0;
  auto* density = app.add_subcommand("density", "density of D or Dhat up to a limit");
  density->add_option("--set", set_name)->check(CLI::IsMember({"d", "dhat", "D", "Dhat"}));
  density->add_option("--limit", limit_text)->required();
  density->add_option("--threads", threads);

  std::string mode = "abelian", f1, f2;
  auto* iso = app.add_subcommand("iso", "isomorphism test");
  iso->add_option("--mode", mode)->check(CLI::IsMember({"abelian", "metacyclic", "bruteforce"}));
  iso->add_option("file1", f1)->required();
  iso->add_option("file2", f2)->required();

  std::string file;
  auto* recognize = app.add_subcommand("recognize", "coprime meta-cyclic recognition");
  recognize->add_option("file", file)->required();
  auto* deconj = app.add_subcommand("deconjugate", "exponent v with x^-1 y x = y^v");
  deconj->add_option("file", file)->required();

  // CLI11 flags can follow the subcommand too
  for (auto* sub : {classify, density, iso, recognize, deconj}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*classify) return cmd_classify(n_arg, cfg);
    if (*density) return cmd_density(set_name, limit_text, threads, cfg);
    if (*iso) return cmd_iso(mode, f1, f2, cfg);
    if (*recognize) return cmd_recognize(file, cfg);
    if (*deconj) return cmd_deconjugate(file, cfg);
  } catch (const NotCoprimeMetacyclic& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
  } catch (const LasVegasExhausted& e) {
    std::cerr << "Las Vegas budget exhausted: " << e.what() << "\n";
  } catch (const GroupFormatError& e) {
    std::cerr << "bad group file: " << e.what() << "\n";
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const PreconditionViolation& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
  } catch (const NonAbelianInput& e) {
    std::cerr << "not abelian: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
