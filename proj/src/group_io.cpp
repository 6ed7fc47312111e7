#include "bbiso/group_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bbiso {

using nlohmann::json;

namespace {

void require_fields(const json& doc, const std::set<std::string>& required, const std::set<std::string>& optional) {
  for (const auto& [key, _] : doc.items())
    if (!required.count(key) && !optional.count(key)) throw GroupFormatError("unknown field '" + key + "'");
  for (const auto& key : required)
    if (!doc.contains(key)) throw GroupFormatError("missing field '" + key + "'");
}

i64 as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw GroupFormatError(std::string(what) + " must be an integer");
  return v.get<i64>();
}

u64 as_positive(const json& v, const char* what) {
  i64 x = as_int(v, what);
  if (x <= 0) throw GroupFormatError(std::string(what) + " must be positive");
  return static_cast<u64>(x);
}

const json& as_list(const json& v, const char* what) {
  if (!v.is_array()) throw GroupFormatError(std::string(what) + " must be a list");
  return v;
}

std::optional<FactoredInteger> read_order(const json& doc) {
  std::optional<FactoredInteger> factored;
  if (doc.contains("order_factors")) {
    std::vector<PrimePower> f;
    for (const auto& pe : as_list(doc["order_factors"], "order_factors")) {
      if (!pe.is_array() || pe.size() != 2) throw GroupFormatError("order_factors entries must be [p,e]");
      f.push_back({as_positive(pe[0], "prime"), static_cast<unsigned>(as_positive(pe[1], "exponent"))});
    }
    try {
      factored = FactoredInteger::from_factors(std::move(f));
    } catch (const std::exception& e) {
      throw GroupFormatError(std::string("order_factors: ") + e.what());
    }
  }
  if (doc.contains("order")) {
    u64 n = as_positive(doc["order"], "order");
    if (factored && factored->value() != n) throw GroupFormatError("order and order_factors disagree");
    if (!factored) factored = factorize(n);
  }
  return factored;
}

}  // namespace

GroupHandle parse_group(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GroupFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw GroupFormatError("document must be an object with a string 'kind'");
  const std::string kind = doc["kind"];
  const std::set<std::string> opt = {"order", "order_factors"};
  std::shared_ptr<const Backend> backend;
  std::vector<Element> gens;
  try {
    if (kind == "zmod") {
      require_fields(doc, {"kind", "moduli", "generators"}, opt);
      std::vector<u64> moduli;
      for (const auto& m : as_list(doc["moduli"], "moduli")) moduli.push_back(as_positive(m, "modulus"));
      auto b = std::make_shared<ZmodBackend>(moduli);
      for (const auto& g : as_list(doc["generators"], "generators")) {
        std::vector<i64> r;
        for (const auto& x : as_list(g, "generator")) r.push_back(as_int(x, "residue"));
        gens.push_back(b->make(r));
      }
      backend = b;
    } else if (kind == "perm") {
      require_fields(doc, {"kind", "degree", "generators"}, opt);
      auto b = std::make_shared<PermBackend>(as_positive(doc["degree"], "degree"));
      for (const auto& g : as_list(doc["generators"], "generators")) {
        std::vector<u64> img;
        for (const auto& x : as_list(g, "generator")) {
          i64 v = as_int(x, "image");
          if (v < 0) throw GroupFormatError("perm images must be non-negative");
          img.push_back(static_cast<u64>(v));
        }
        gens.push_back(b->make(img));
      }
      backend = b;
    } else if (kind == "matmod") {
      require_fields(doc, {"kind", "prime", "dim", "generators"}, opt);
      auto b = std::make_shared<MatmodBackend>(as_positive(doc["prime"], "prime"), as_positive(doc["dim"], "dim"));
      for (const auto& g : as_list(doc["generators"], "generators")) {
        std::vector<std::vector<i64>> rows;
        for (const auto& row : as_list(g, "matrix")) {
          std::vector<i64> r;
          for (const auto& x : as_list(row, "row")) r.push_back(as_int(x, "entry"));
          rows.push_back(r);
        }
        gens.push_back(b->make(rows));
      }
      backend = b;
    } else if (kind == "semidirect") {
      require_fields(doc, {"kind", "c", "d", "v", "generators"}, opt);
      auto b = std::make_shared<SemidirectBackend>(as_positive(doc["c"], "c"), as_positive(doc["d"], "d"),
                                                   as_positive(doc["v"], "v"));
      for (const auto& g : as_list(doc["generators"], "generators")) {
        if (!g.is_array() || g.size() != 2) throw GroupFormatError("semidirect generators are [i,j] pairs");
        gens.push_back(b->make(as_int(g[0], "i"), as_int(g[1], "j")));
      }
      backend = b;
    } else {
      throw GroupFormatError("unknown kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw GroupFormatError(e.what());
  }
  if (gens.empty()) throw GroupFormatError("generators must be non-empty");
  auto order = read_order(doc);
  GroupHandle g(backend, gens, order);
  if (order) {
    for (const auto& s : gens)
      if (!g.is_identity(g.power(s, order->value())))
        throw GroupFormatError("a generator's order does not divide the declared order");
  }
  return g;
}

GroupHandle load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GroupFormatError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group(ss.str());
}

std::string serialize_group(const GroupHandle& g) {
  json doc;
  const Backend& b = g.backend();
  json gens = json::array();
  if (auto* z = dynamic_cast<const ZmodBackend*>(&b)) {
    doc["kind"] = "zmod";
    doc["moduli"] = z->moduli();
    for (const auto& s : g.generators()) gens.push_back(s.words());
  } else if (auto* p = dynamic_cast<const PermBackend*>(&b)) {
    doc["kind"] = "perm";
    doc["degree"] = p->degree();
    for (const auto& s : g.generators()) gens.push_back(s.words());
  } else if (auto* m = dynamic_cast<const MatmodBackend*>(&b)) {
    doc["kind"] = "matmod";
    doc["prime"] = m->prime();
    doc["dim"] = m->dim();
    for (const auto& s : g.generators()) {
      json rows = json::array();
      for (std::size_t i = 0; i < m->dim(); ++i)
        rows.push_back(std::vector<u64>(s.words().begin() + i * m->dim(), s.words().begin() + (i + 1) * m->dim()));
      gens.push_back(rows);
    }
  } else if (auto* sd = dynamic_cast<const SemidirectBackend*>(&b)) {
    doc["kind"] = "semidirect";
    doc["c"] = sd->c();
    doc["d"] = sd->d();
    doc["v"] = sd->v();
    for (const auto& s : g.generators()) gens.push_back(s.words());
  } else {
    throw GroupFormatError("backend '" + b.kind() + "' has no file format");
  }
  doc["generators"] = gens;
  if (g.known_order()) {
    json f = json::array();
    for (const auto& pp : g.known_order()->factors()) f.push_back({pp.prime, pp.exponent});
    doc["order"] = g.known_order()->value();
    doc["order_factors"] = f;
  }
  return doc.dump();
}

}  // namespace bbiso
