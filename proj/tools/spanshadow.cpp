// Command-line front end: span actions, coherence suites, fixed-point counts
// and the deformation calculus. Reports go to stdout as JSON lines, summaries to
// stderr. Exit codes: 0 pass, 1 counterexample, 2 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spanshadow/json_io.hpp"
#include "spanshadow/models.hpp"
#include "spanshadow/suites.hpp"

using namespace spanshadow;

namespace {

constexpr int kPass = 0;
constexpr int kCounterexample = 1;
constexpr int kInputError = 2;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

// ---- span -------------------------------------------------------------------

int span_act(const std::string& span_path, const std::vector<std::string>& input_paths) {
  Json doc = read_json(span_path);
  Registry reg = registry_from_json(doc);
  MultiSpan s = multispan_from_json(reg, doc);
  if (input_paths.size() != s.arity())
    throw InputError("span has " + std::to_string(s.arity()) + " inputs but " + std::to_string(input_paths.size()) + " were given");
  std::vector<ParamSet> xs;
  for (std::size_t i = 0; i < input_paths.size(); ++i) xs.push_back(paramset_from_json(reg, read_json(input_paths[i]), s.inputs[i]));
  emit(to_json(multispan_action(s, xs)));
  return kPass;
}

int span_rigid(const std::string& span_path) {
  Json doc = read_json(span_path);
  MultiSpan s = multispan_from_json(registry_from_json(doc), doc);
  InjectivityReport r = is_rigid(s);
  if (r.injective) {
    std::cout << "rigid\n";
  } else {
    std::cout << "not-rigid " << Json::array({to_json(r.witness->first), to_json(r.witness->second)}).dump() << "\n";
  }
  return kPass;
}

// ---- coherence --------------------------------------------------------------

GroupDoc load_group(const std::string& spec) {
  if (spec == "C2") return {FinGroup::cyclic(2), {}};
  if (spec == "C3") return {FinGroup::cyclic(3), {}};
  if (spec == "S3") return {FinGroup::s3(), {Subgroup::make(FinGroup::s3(), "A3", {0, 1, 2})}};
  return group_from_json(read_json(spec));
}

std::vector<GroupChoice> default_groups() {
  std::vector<GroupChoice> out;
  for (const auto& g : {FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::s3()})
    for (const auto& h : all_subgroups(g)) out.push_back({g, h});
  return out;
}

struct CoherenceArgs {
  std::string suite;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::size_t instances = 100;
  int max_size = 4;
  int max_total = 6;
  std::string base;
  std::string group;
  std::string subgroup;
};

int coherence(const CoherenceArgs& a) {
  std::vector<const Suite*> suites;
  if (a.suite == "all") {
    for (const auto& s : all_suites())
      if (s.name.rfind("selftest.", 0) != 0) suites.push_back(&s);
  } else if (const Suite* s = find_suite(a.suite)) {
    suites.push_back(s);
  } else {
    throw InputError("unknown suite " + a.suite);
  }
  if (a.n > 3) throw InputError("--n must be 1, 2 or 3");
  if (a.max_size < 0 || a.max_total < 0) throw InputError("size bounds must be nonnegative");
  SuiteParams p;
  p.seed = a.seed;
  p.instances = a.instances;
  p.n = a.n;
  p.gen.max_size = a.max_size;
  p.gen.max_total = a.max_total;
  if (!a.base.empty()) {
    FinSet b = finset_from_json(read_json(a.base));
    if (b.size() == 0) throw InputError("base context must be nonempty");
    p.gen.ctx = BaseContext{b};
  }
  std::vector<GroupChoice> groups;
  if (!a.group.empty()) {
    GroupDoc g = load_group(a.group);
    if (a.subgroup.empty()) {
      for (const auto& h : all_subgroups(g.group)) groups.push_back({g.group, h});
    } else {
      groups.push_back({g.group, g.subgroup(a.subgroup)});
    }
  } else if (!a.subgroup.empty()) {
    throw InputError("--subgroup needs --group");
  } else {
    groups = default_groups();
  }

  unsigned workers = worker_count();
  std::size_t runs = 0, failed = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const Suite* s : suites) {
    std::vector<std::optional<GroupChoice>> choices{std::nullopt};
    if (s->equivariant) choices.assign(groups.begin(), groups.end());
    for (const auto& c : choices) {
      SuiteParams q = p;
      q.group = c;
      SuiteReport r = run_suite(*s, q, workers);
      emit(r.to_json());
      ++runs;
      if (!r.passed()) {
        ++failed;
        std::cerr << r.suite << (c ? " [" + c->group.name() + "/" + c->subgroup.name + "]" : "") << ": "
                  << r.failures.size() << " of " << r.instances << " instances failed\n";
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << runs << " suite runs, " << failed << " failing, " << a.instances << " instances each, " << secs << " s\n";
  return failed ? kCounterexample : kPass;
}

// ---- count ------------------------------------------------------------------

int count(const std::string& kind, const std::string& map_path, std::size_t n, const std::string& group,
          const std::string& subgroup, bool certify) {
  if (n == 0) throw InputError("--n must be at least 1");
  Json doc = read_json(map_path);
  if (kind == "equivariant") {
    if (group.empty() || subgroup.empty()) throw InputError("count equivariant needs --group and --subgroup");
    GroupDoc g = load_group(group);
    Subgroup h = g.subgroup(subgroup);
    EndoMap e = endomap_from_json(doc);
    if (!doc.contains("action")) throw InputError("equivariant map needs \"action\"");
    GAction act = action_from_json(g.group, e.set(), doc["action"]);
    GSpace a(IndexedSpace::absolute(e.set()), act);
    std::optional<GMap> f;
    try {
      f.emplace(a, a, e.f.map);
    } catch (const SpanError& err) {
      throw InputError(err.what());
    }
    std::cout << equivariant_fix_count(*f, h, n) << "\n";
    return kPass;
  }
  EndoMap e = endomap_from_json(doc);
  if (kind == "fix") {
    std::cout << fix_count(e, n) << "\n";
  } else if (kind == "least-period") {
    std::cout << least_period_count(e, n) << "\n";
  } else if (kind == "fuller") {
    FullerCount c = fuller_count(e, n);
    if (certify) {
      emit({{"count", c.count}, {"bijection", map_pairs(c.to_fixed.forward)}});
    } else {
      std::cout << c.count << "\n";
    }
  } else {
    throw InputError("unknown count " + kind);
  }
  return kPass;
}

// ---- deform -----------------------------------------------------------------

Model load_model(const std::string& spec, std::size_t max_vertices) {
  if (spec == "graph") return graph_model(max_vertices);
  if (spec == "chain") return chain_model();
  try {
    return table_model(read_json(spec));
  } catch (const DeformationError& e) {
    throw InputError(e.what());
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int deform(const std::string& action, const std::string& model_spec, const std::string& list, std::size_t max_vertices) {
  Model m = load_model(model_spec, max_vertices);
  std::vector<std::string> names = split(list);
  if (names.empty() && action != "compare")
    for (const auto& f : m.functors) names.push_back(f.name);
  for (const auto& n : names) try {
      m.functor(n);
    } catch (const DeformationError& e) {
      throw InputError(e.what());
    }
  if (m.deformations.empty()) throw InputError("model " + m.name + " has no deformation");
  const RightDeformation& d = m.deformations[0];

  if (action == "validate") {
    bool ok = true;
    for (const auto& n : names) {
      Report r = validate_deformation(m.functor(n), m.deformation_or_trivial(m.functor(n).source));
      emit({{"model", m.name}, {"functor", n}, {"valid", r.ok()}, {"report", r.to_json()}});
      ok = ok && r.ok();
    }
    std::cerr << (ok ? "valid" : "invalid") << "\n";
    return ok ? kPass : kCounterexample;
  }
  if (action == "derive") {
    bool ok = true;
    for (const auto& n : names) {
      const WEFunctor& f = m.functor(n);
      try {
        WEFunctor rf = derived_functor(f, m.deformation_or_trivial(f.source));
        Json objs = Json::array();
        for (std::size_t x = 0; x < f.source->object_count(); ++x)
          objs.push_back({f.source->object_label(x), f.target->object_label(rf(x))});
        emit({{"model", m.name}, {"functor", n}, {"derived", objs}});
      } catch (const DeformationError& e) {
        ok = false;
        emit({{"model", m.name}, {"functor", n}, {"error", e.what()}});
      }
    }
    return ok ? kPass : kCounterexample;
  }
  if (action == "compare") {
    if (names.size() < 2) throw InputError("deform compare needs --list with at least two functors");
    DeformableList l = m.list(names);
    try {
      Comparison c = compare_composites(l);
      std::size_t identities = 0;
      for (std::size_t x = 0; x < c.lhs.source->object_count(); ++x)
        identities += c.kappa(x) == c.lhs.target->identity(c.lhs(x));
      emit({{"model", m.name},
            {"list", names},
            {"components_we", c.report.ok()},
            {"identity_components", identities},
            {"report", c.report.to_json()}});
      std::cerr << (c.report.ok() ? "all components are weak equivalences" : "comparison fails") << "\n";
      return c.report.ok() ? kPass : kCounterexample;
    } catch (const DeformationError& e) {
      emit({{"model", m.name}, {"list", names}, {"error", e.what()}});
      return kCounterexample;
    }
  }
  if (action == "ho") {
    try {
      std::vector<WEFunctor> probes;
      for (const auto& n : names) {
        const WEFunctor& f = m.functor(n);
        if (f.source == d.cat) probes.push_back(derived_functor(f, d));
      }
      Localization loc = homotopy_category(d, probes);
      Json objs = Json::array();
      for (std::size_t i = 0; i < loc.ho->object_count(); ++i) objs.push_back(loc.ho->object_label(i));
      std::size_t morphisms = 0;
      loc.ho->for_each_morphism([&](const Mor&) { return ++morphisms; });
      emit({{"model", m.name},
            {"objects", loc.ho->object_count()},
            {"morphisms", morphisms},
            {"radiant", objs},
            {"report", loc.report.to_json()}});
      std::cerr << "Ho(" << m.name << "): " << loc.ho->object_count() << " objects\n";
      return loc.report.ok() ? kPass : kCounterexample;
    } catch (const DeformationError& e) {
      emit({{"model", m.name}, {"rejected", e.what()}});
      std::cerr << "rejected: " << e.what() << "\n";
      return kCounterexample;
    }
  }
  throw InputError("unknown deform action " + action);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite span bicategory toolkit"};
  app.require_subcommand(1);

  auto* span = app.add_subcommand("span", "Act with or test a multi-span");
  span->require_subcommand(1);
  std::string span_path;
  std::vector<std::string> inputs;
  auto* act = span->add_subcommand("act", "Apply a multi-span to parametrized inputs");
  act->add_option("span", span_path, "multi-span JSON")->required();
  act->add_option("inputs", inputs, "one ParamSet JSON per input");
  auto* rigid = span->add_subcommand("rigid", "Injectivity of the tupled span map");
  rigid->add_option("span", span_path, "multi-span JSON")->required();

  CoherenceArgs ca;
  auto* coh = app.add_subcommand("coherence", "Run a coherence suite on seeded random instances");
  coh->add_option("suite", ca.suite, "suite name, or all")->required();
  coh->add_option("--n", ca.n, "arity of n-ary suites; 0 cycles through 1..3");
  coh->add_option("--seed", ca.seed, "base seed");
  coh->add_option("--instances", ca.instances, "instances per suite");
  coh->add_option("--max-size", ca.max_size, "largest 0-cell");
  coh->add_option("--max-total", ca.max_total, "largest 1-cell");
  coh->add_option("--base", ca.base, "context set JSON for fiberwise runs");
  coh->add_option("--group", ca.group, "C2, C3, S3 or a group JSON");
  coh->add_option("--subgroup", ca.subgroup, "subgroup name");

  std::string kind, map_path, group, subgroup;
  std::size_t n = 1;
  bool certify = false;
  auto* cnt = app.add_subcommand("count", "Fixed-point invariants of an endomap");
  cnt->add_option("kind", kind, "fix, fuller, least-period or equivariant")
      ->required()
      ->check(CLI::IsMember({"fix", "fuller", "least-period", "equivariant"}));
  cnt->add_option("--map", map_path, "endomap JSON")->required();
  cnt->add_option("--n", n, "period");
  cnt->add_option("--group", group, "C2, C3, S3 or a group JSON");
  cnt->add_option("--subgroup", subgroup, "subgroup name");
  cnt->add_flag("--certify", certify, "print the bijection to the fixed points (fuller)");

  std::string daction, model = "graph", list;
  std::size_t max_vertices = 4;
  auto* def = app.add_subcommand("deform", "Right-deformation calculus on a finite model");
  def->add_option("action", daction, "validate, derive, compare or ho")
      ->required()
      ->check(CLI::IsMember({"validate", "derive", "compare", "ho"}));
  def->add_option("--model", model, "graph, chain or a table model JSON");
  def->add_option("--list", list, "comma-separated functor names");
  def->add_option("--max-vertices", max_vertices, "graph model size bound")->check(CLI::Range(0, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*act) return span_act(span_path, inputs);
    if (*rigid) return span_rigid(span_path);
    if (*coh) return coherence(ca);
    if (*cnt) return count(kind, map_path, n, group, subgroup, certify);
    if (*def) return deform(daction, model, list, max_vertices);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const SpanError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
