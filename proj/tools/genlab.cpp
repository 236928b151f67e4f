// genlab command-line front end. Exit codes: 0 ok, 2 input error,
// 3 cap refusal, 4 verification failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "genlab/genlab.hpp"
#include "genlab/io.hpp"

using namespace genlab;
using json = nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitVerify = 4;

struct Output {
  json j = json::object();
  std::vector<std::string> text;
  std::string csv;  // set by commands with a natural table form
  int code = 0;
};

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string yes(bool b) { return b ? "true" : "false"; }

std::string names_of(const ElementSet& S, const std::vector<std::string>& names) {
  std::string s = "{";
  bool first = true;
  S.for_each([&](std::size_t i) {
    s += (first ? "" : ",") + names.at(i);
    first = false;
  });
  return s + "}";
}

/// "1" for the top element, otherwise the atom list.
std::string value_text(const FiniteBooleanAlgebra& A, const ElementSet& x) { return x == A.one() ? "1" : A.format(x); }

ChooserPolicy parse_policy(const std::string& s) {
  if (s == "lex" || s == "lexicographic") return ChooserPolicy::Lexicographic;
  if (s == "seeded" || s == "random") return ChooserPolicy::SeededRandom;
  throw InputError("unknown policy '" + s + "' (use lex or seeded)");
}

// ---------------------------------------------------------------------------

Output cmd_reg(const std::string& file) {
  const FinitePoset P = io::poset_from_json(io::read_json_file(file));
  const auto reg = regular_algebra(P);
  const auto& A = reg.algebra;
  Output o;
  const bool sep = is_separative(P);
  o.j["separative"] = sep;
  o.j["atoms"] = A.atom_count();
  json atoms = json::array();
  for (auto a : reg.atom_elements) atoms.push_back(P.name(a));
  o.j["atom_elements"] = atoms;
  json embed = json::object();
  for (Element p = 0; p < P.size(); ++p) {
    json row = json::array();
    reg.embed[p].for_each([&](std::size_t a) { row.push_back(P.name(reg.atom_elements[a])); });
    embed[P.name(p)] = row;
  }
  o.j["embed"] = embed;
  std::string vals = "skipped (poset above " + std::to_string(kMaxFilterSentencePoset) + " elements)";
  if (P.size() <= kMaxFilterSentencePoset) {
    const auto v = filter_sentence_values(P);
    o.j["validities"] = {value_text(A, v.upward), value_text(A, v.directed), value_text(A, v.decides)};
    vals = value_text(A, v.upward) + "," + value_text(A, v.directed) + "," + value_text(A, v.decides);
  } else {
    o.j["validities"] = nullptr;
  }
  o.text.push_back("separative: " + yes(sep) + "; atoms: " + std::to_string(A.atom_count()) + "; validities: " + vals);
  for (Element p = 0; p < P.size(); ++p) {
    std::vector<std::string> at;
    for (const auto& n : embed[P.name(p)]) at.push_back(n.get<std::string>());
    std::string line = "embed " + P.name(p) + ": {";
    for (std::size_t i = 0; i < at.size(); ++i) line += (i ? "," : "") + at[i];
    o.text.push_back(line + "}");
  }
  return o;
}

Output cmd_generic(const std::string& file, const std::string& start, const std::string& policy, std::uint64_t seed) {
  const FinitePoset P = io::poset_from_json(io::read_json_file(file));
  if (P.size() > 16) throw CapRefusal("dense-set enumeration poset size", 16);
  DenseFamily fam;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << P.size()); ++m) {
    const auto X = ElementSet::from_mask(P.size(), m);
    if (is_dense(P, X)) fam.push_back(X);
  }
  GenericBuildSpec spec;
  spec.poset = &P;
  spec.family = fam;
  spec.start = start.empty() ? (P.top() == P.size() ? 0 : P.top()) : P.index(start);
  spec.policy = parse_policy(policy);
  spec.seed = seed;
  const auto r = build_generic(spec);
  const bool generic = is_generic(P, r.filter, fam);
  const Element least = least_member(P, r.filter);
  const bool principal_minimal =
      least < P.size() && P.minimal_elements().contains(least) && r.filter == P.up(least);
  Output o;
  o.j["dense_sets"] = fam.size();
  o.j["filter"] = io::set_to_json(r.filter, P.names());
  json seq = json::array();
  for (auto e : r.sequence) seq.push_back(P.name(e));
  o.j["sequence"] = seq;
  o.j["generic"] = generic;
  o.j["principal_at_minimal"] = principal_minimal;
  o.text.push_back("dense sets: " + std::to_string(fam.size()));
  o.text.push_back("filter: " + names_of(r.filter, P.names()));
  o.text.push_back("generic: " + yes(generic) + "; principal at a minimal element: " + yes(principal_minimal));
  if (!generic || !principal_minimal) o.code = kExitVerify;
  return o;
}

struct BornArgs {
  double q = 0.5;
  std::size_t n = 4096;
  std::size_t mmax = 20;
  std::size_t nmax = 512;
  std::string policy = "seeded";
  std::string thresholds;
  std::string csv_out;
  std::string cert_out;
};

Output cmd_born(const BornArgs& a, std::uint64_t seed) {
  const FrequencyThresholds th = a.thresholds.empty() ? FrequencyThresholds{} : io::thresholds_from_json(io::read_json_file(a.thresholds));
  const auto run = born_simulate(a.q, a.n, a.mmax, a.nmax, parse_policy(a.policy), seed);
  const std::string verdict = verify_born_certificate(run);
  const auto freq = frequency_report(run.bits, a.q, th);
  const double band = 4.0 * std::sqrt(a.q * (1 - a.q) / static_cast<double>(a.n));

  Output o;
  o.j["q"] = a.q;
  o.j["N"] = a.n;
  o.j["M_max"] = a.mmax;
  o.j["N_max"] = a.nmax;
  o.j["policy"] = run.policy == ChooserPolicy::Lexicographic ? "lex" : "seeded";
  o.j["seed"] = seed;
  o.j["mean"] = run.mean();
  o.j["acceptance_band"] = band;
  o.j["within_band"] = std::abs(run.mean() - a.q) <= band;
  o.j["fallback_used"] = run.fallback_used;
  json cert = json::array();
  for (const auto& e : run.certificate)
    cert.push_back({{"M", e.M}, {"n_prime", e.n_prime}, {"step", e.step}, {"met", e.met}, {"n", e.n}});
  json certificate = {{"schema", "genlab/1"},
                      {"q", a.q},
                      {"N", a.n},
                      {"M_max", a.mmax},
                      {"N_max", a.nmax},
                      {"families", cert},
                      {"verified", verdict.empty()}};
  if (!verdict.empty()) certificate["failure"] = verdict;
  o.j["certificate"] = certificate;
  json blocks = json::array();
  for (const auto& b : freq.block_tests)
    blocks.push_back({{"block", b.block}, {"blocks", b.blocks}, {"z", b.z}, {"flagged", b.flagged}});
  o.j["frequency"] = {{"mean_z", freq.mean_z},       {"longest_run", freq.longest_run}, {"runs", freq.runs},
                      {"runs_z", freq.runs_z},       {"runs_flagged", freq.runs_flagged}, {"blocks", blocks},
                      {"any_flagged", freq.any_flagged()}};

  std::ostringstream csv;
  csv << "step,bit,running_mean\n";
  std::size_t ones = 0;
  for (std::size_t i = 0; i < run.bits.size(); ++i) {
    ones += run.bits[i];
    csv << i + 1 << ',' << int(run.bits[i]) << ',' << fixed(double(ones) / double(i + 1)) << '\n';
  }
  o.csv = csv.str();
  if (!a.csv_out.empty()) {
    std::ofstream f(a.csv_out);
    if (!f) throw InputError("cannot write '" + a.csv_out + "'");
    f << o.csv;
  }
  if (!a.cert_out.empty()) {
    std::ofstream f(a.cert_out);
    if (!f) throw InputError("cannot write '" + a.cert_out + "'");
    f << certificate.dump(2) << '\n';
  }
  std::size_t met = 0;
  for (const auto& e : run.certificate) met += e.met;
  o.text.push_back("mean: " + fixed(run.mean()) + " (q = " + fixed(a.q, 4) + ", band +-" + fixed(band) + ")");
  o.text.push_back("certificate: " + std::to_string(run.certificate.size()) + " band families, " + std::to_string(met) +
                   " met; " + (verdict.empty() ? "verified" : "FAILED: " + verdict));
  o.text.push_back("runs z: " + fixed(freq.runs_z, 3) + "; longest run: " + std::to_string(freq.longest_run) +
                   "; flagged: " + yes(freq.any_flagged()));
  if (!verdict.empty()) o.code = kExitVerify;
  return o;
}

Output cmd_expr(const std::string& text, std::size_t atoms, const std::vector<std::string>& pis, bool check) {
  const BoolExpr E = parse_expr(text);
  const FiniteBooleanAlgebra A(atoms);
  std::vector<ElementSet> pi;
  for (const auto& s : pis) {
    // "i:a,b,c" assigns primitive i the atom set {a,b,c}
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InputError("--pi expects i:atoms, got '" + s + "'");
    const std::size_t i = std::stoul(s.substr(0, colon));
    if (i > 64) throw InputError("primitive index too large");
    if (pi.size() <= i) pi.resize(i + 1, A.zero());
    std::stringstream ss(s.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) pi[i] |= A.atom(std::stoul(tok));
  }
  Output o;
  o.j["expr"] = print(E);
  o.j["rank"] = E.rank();
  o.j["subexpressions"] = subexpressions(E).size();
  o.j["borel"] = is_borel(E);
  o.text.push_back("expr: " + print(E) + "; rank: " + std::to_string(E.rank()) +
                   "; subexpressions: " + std::to_string(subexpressions(E).size()));
  const auto v = evaluate(E, A, pi);
  o.j["value"] = v.members();
  o.text.push_back("value: " + A.format(v));
  if (check) {
    if (atoms > kMaxPrefilterAtoms) throw CapRefusal("prefilter enumeration atoms", kMaxPrefilterAtoms);
    std::size_t total = 0, generic = 0, bad = 0;
    for (const auto& D : propositional_prefilters(A)) {
      const auto r = pi_delta_equivalence_check(E, A, pi, D);
      ++total;
      if (r.generic) {
        ++generic;
        if (!r.agree()) ++bad;
      }
    }
    o.j["prefilters"] = total;
    o.j["generic_prefilters"] = generic;
    o.j["violations"] = bad;
    o.text.push_back("prefilters: " + std::to_string(total) + "; generic: " + std::to_string(generic) +
                     "; violations: " + std::to_string(bad));
    if (bad) o.code = kExitVerify;
  }
  return o;
}

Output cmd_psys(const std::string& file, const std::string& sub, const std::vector<double>& weights) {
  const auto L = io::system_from_json(io::read_json_file(file));
  const AbstractPS& R = L.abstract;
  Output o;
  o.j["elements"] = R.size();
  o.j["subcommand"] = sub;
  if (sub == "reductive") {
    const auto r = is_reductive(R);
    o.j["reductive"] = r.reductive;
    std::string line = "reductive: " + yes(r.reductive);
    if (!r.reductive) {
      o.j["witness"] = {{"S", io::set_to_json(r.witness_set, R.names())}, {"P", R.name(r.witness_prop)}};
      line += "; witness S = " + names_of(r.witness_set, R.names()) + ", P = " + R.name(r.witness_prop);
    }
    o.text.push_back(line);
  } else if (sub == "conditions" || sub == "malley") {
    const auto CP = condition_poset(R);
    const auto maximal = CP.poset.minimal_elements().count();
    const auto atoms = regular_algebra(CP.poset).algebra.atom_count();
    const bool sep = is_separative(CP.poset);
    o.j["conditions"] = CP.conditions.size();
    o.j["maximal"] = maximal;
    o.j["atoms"] = atoms;
    o.j["separative"] = sep;
    json conds = json::array();
    for (const auto& c : CP.conditions) conds.push_back(io::set_to_json(c, R.names()));
    o.j["condition_list"] = conds;
    o.text.push_back("conditions: " + std::to_string(CP.conditions.size()) + "; maximal: " + std::to_string(maximal) +
                     "; atoms: " + std::to_string(atoms));
    if (sub == "conditions") {
      o.text.push_back("separative: " + yes(sep));
      for (std::size_t i = 0; i < CP.conditions.size(); ++i)
        o.text.push_back("  " + CP.poset.name(i) + " = " + names_of(CP.conditions[i], R.names()));
    } else {
      std::vector<double> w = weights;
      if (w.empty()) w.assign(atoms, 1.0 / static_cast<double>(atoms));
      const auto t = measure_table(R, w);
      const std::string p = R.name(t.P), np = R.name(R.complement(t.P)), q = R.name(t.Q), nq = R.name(R.complement(t.Q));
      o.j["table"] = {{"rows", {p, np}}, {"cols", {q, nq}}, {"joint", t.joint}, {"mu_rows", t.mu_p}, {"mu_cols", t.mu_q},
                      {"max_marginal_error", t.max_marginal_error}};
      o.text.push_back("        " + q + "        " + nq);
      for (int i = 0; i < 2; ++i)
        o.text.push_back((i ? np : p) + "  " + fixed(t.joint[i][0]) + "  " + fixed(t.joint[i][1]) + "  | " +
                         fixed(t.mu_p[i]));
      o.text.push_back("    " + fixed(t.mu_q[0]) + "  " + fixed(t.mu_q[1]));
      o.text.push_back("max marginal error: " + fixed(t.max_marginal_error, 15));
      if (t.max_marginal_error > 1e-12) o.code = kExitVerify;
    }
  } else if (sub == "ultra") {
    const auto u = ultrasemifilter_search(R);
    o.j["found"] = u.has_value();
    if (u) {
      o.j["ultrasemifilter"] = io::set_to_json(*u, R.names());
      o.text.push_back("ultrasemifilter: " + names_of(*u, R.names()));
    } else {
      o.text.push_back("ultrasemifilter: none (exhaustive)");
    }
  } else if (sub == "tR") {
    const auto CP = condition_poset(R);
    const auto v = tR_validities(R, CP);
    const auto& A = regular_algebra(CP.poset).algebra;
    o.j["clauses"] = {value_text(A, v.upward), value_text(A, v.meets), value_text(A, v.decides)};
    o.j["commuting_subsets"] = v.commuting_subsets;
    o.text.push_back("upward: " + value_text(A, v.upward) + "; meets: " + value_text(A, v.meets) +
                     "; decides: " + value_text(A, v.decides));
  } else {
    throw InputError("unknown psys subcommand '" + sub + "'");
  }
  return o;
}

Output cmd_quantum(const std::string& sub, const std::string& file, std::size_t dim) {
  Output o;
  if (sub == "asymmetry") {
    const auto w = malley_asymmetry_witness(dim);
    o.j["dim"] = dim;
    o.j["tr_DPQP"] = w.tr_dpqp;
    o.j["tr_DQPQ"] = w.tr_dqpq;
    o.j["difference"] = w.difference();
    o.j["recomputed_agree"] = std::abs(w.tr_dpqp - w.tr_dpqp_elementwise) <= 1e-9 &&
                              std::abs(w.tr_dqpq - w.tr_dqpq_elementwise) <= 1e-9;
    o.text.push_back("tr(DPQP) = " + fixed(w.tr_dpqp, 9) + "; tr(DQPQ) = " + fixed(w.tr_dqpq, 9) +
                     "; difference = " + fixed(w.difference(), 9));
    if (!o.j["recomputed_agree"].get<bool>()) o.code = kExitVerify;
  } else if (sub == "system") {
    if (file.empty()) throw InputError("quantum system needs a system file");
    const auto L = io::system_from_json(io::read_json_file(file));
    if (!L.quantum) throw InputError("system file holds no Hilbert-space data");
    const auto& R = *L.quantum;
    std::size_t commuting = 0;
    for (std::size_t i = 0; i < R.size(); ++i)
      for (std::size_t j = i + 1; j < R.size(); ++j) commuting += commutes(R.elements[i], R.elements[j]);
    o.j["dim"] = R.dim;
    o.j["elements"] = R.size();
    o.j["names"] = R.names;
    o.j["commuting_pairs"] = commuting;
    o.text.push_back("dim: " + std::to_string(R.dim) + "; elements: " + std::to_string(R.size()) +
                     "; commuting pairs: " + std::to_string(commuting));
  } else {
    throw InputError("unknown quantum subcommand '" + sub + "'");
  }
  return o;
}

Output cmd_force(const std::string& file, const std::string& sub, const std::string& arg, std::size_t count,
                 std::size_t ground_rank, std::uint64_t seed) {
  const FinitePoset P = io::poset_from_json(io::read_json_file(file));
  if (P.top() == P.size()) throw InputError("forcing needs a poset with a maximum");
  ForcingSession session(P, hf_universe(ground_rank + 1));
  Output o;
  std::vector<Element> mins = P.minimal_elements().members();
  if (sub == "eval") {
    const PName x = parse_name(arg, P);
    o.j["rank"] = x.rank();
    json vals = json::object();
    for (auto m : mins) {
      const auto v = eval_name(x, P.up(m));
      vals[P.name(m)] = v.to_string();
      o.text.push_back("G at " + P.name(m) + ": " + v.to_string());
    }
    o.j["values"] = vals;
  } else if (sub == "bv") {
    const Sentence s = parse_sentence(arg, P);
    const auto v = session.bv_sentence(s);
    const auto X = session.reg().to_poset_set(v);
    o.j["sentence"] = s.to_string(&P);
    o.j["value"] = io::set_to_json(X, P.names());
    o.j["is_one"] = v == session.algebra().one();
    json gens = json::object();
    for (auto m : mins) gens[P.name(m)] = holds_in_extension(s, P.up(m), session.ground());
    o.j["holds_at_generic"] = gens;
    o.text.push_back("value: " + names_of(X, P.names()) + (v == session.algebra().one() ? " (= 1)" : ""));
  } else if (sub == "truth") {
    std::mt19937_64 rng(seed);
    std::vector<PName> names = rank_one_names(P);
    for (const auto& a : hf_universe(3)) names.push_back(check_name(a, P));
    for (int k = 0; k < 8; ++k) names.push_back(random_name(rng, P, names, 2));
    for (int k = 0; k < 4; ++k) names.push_back(random_name(rng, P, names, 3));
    names.push_back(gname(P));
    std::vector<Sentence> corpus;
    for (std::size_t i = 0; i < count; ++i) corpus.push_back(random_sentence(rng, names, 3));
    const auto rep = truth_lemma_check(session, corpus);
    o.j["generics"] = rep.generics;
    o.j["sentences"] = rep.sentences;
    o.j["checks"] = rep.checks;
    json disc = json::array();
    for (const auto& d : rep.discrepancies)
      disc.push_back({{"sentence", corpus[d.sentence].to_string(&P)}, {"generic_at", P.name(d.generic_at)},
                      {"holds", d.holds}, {"forced", d.forced}});
    o.j["discrepancies"] = disc;
    o.text.push_back("generics: " + std::to_string(rep.generics) + "; sentences: " + std::to_string(rep.sentences) +
                     "; discrepancies: " + std::to_string(rep.discrepancies.size()));
    if (!rep.discrepancies.empty()) o.code = kExitVerify;
  } else {
    throw InputError("unknown force subcommand '" + sub + "' (use eval, bv or truth)");
  }
  return o;
}

Output cmd_collapse(const std::string& file, std::size_t nodes, const std::string& edges) {
  std::vector<std::pair<std::size_t, std::size_t>> E;
  if (!file.empty()) {
    const auto j = io::read_json_file(file);
    nodes = io::detail::field(j, "nodes").get<std::size_t>();
    for (const auto& e : io::detail::field(j, "relation")) E.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  } else {
    // "x>y" means x E y
    std::stringstream ss(edges);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (tok.empty()) continue;
      const auto gt = tok.find('>');
      if (gt == std::string::npos) throw InputError("edges are written x>y, got '" + tok + "'");
      E.emplace_back(std::stoul(tok.substr(0, gt)), std::stoul(tok.substr(gt + 1)));
    }
  }
  if (nodes == 0) throw InputError("collapse needs at least one node");
  const auto j = transitive_collapse(nodes, E);
  std::vector<std::uint64_t> pre(nodes, 0);
  for (auto [x, y] : E) pre[y] |= std::uint64_t{1} << x;
  const bool ok = verify_collapse(pre, j);
  Output o;
  json m = json::object();
  for (std::size_t n = 0; n < nodes; ++n) {
    m[std::to_string(n)] = j[n].to_string();
    o.text.push_back(std::to_string(n) + " -> " + j[n].to_string());
  }
  o.j["collapse"] = m;
  o.j["verified"] = ok;
  o.text.push_back("isomorphism verified: " + yes(ok));
  if (!ok) o.code = kExitVerify;
  return o;
}

void emit(const Output& o, const std::string& format) {
  if (format == "json") {
    json j = o.j;
    j["schema"] = "genlab/1";
    std::cout << j.dump(2) << '\n';
  } else if (format == "csv") {
    if (!o.csv.empty()) {
      std::cout << o.csv;
      return;
    }
    std::cout << "key,value\n";
    for (auto it = o.j.begin(); it != o.j.end(); ++it)
      if (it->is_primitive()) std::cout << it.key() << ',' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
  } else {
    for (const auto& l : o.text) std::cout << l << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genlab: generic filters, regular algebras and propositional systems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  std::uint64_t seed = 0;
  double cap_seconds = 60;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--cap-seconds", cap_seconds, "Refuse (exit 3) once this much wall time is spent; 0 disables");

  std::string file, sub, start, policy = "lex", arg, edges, expr_text;
  std::size_t count = 100, ground_rank = 3, nodes = 0, atoms = 2, dim = 2;
  std::vector<std::string> pis;
  std::vector<double> weights;
  bool check = false;
  BornArgs born;

  auto* reg = app.add_subcommand("reg", "Regular algebra of a poset");
  reg->add_option("poset", file, "Poset JSON")->required();

  auto* gen = app.add_subcommand("generic", "Build a filter generic for every dense set");
  gen->add_option("poset", file, "Poset JSON")->required();
  gen->add_option("--start", start, "Starting condition (default: the maximum)");
  gen->add_option("--policy", policy, "lex or seeded");

  auto* bornc = app.add_subcommand("born", "Born-statistics run from a generic sequence");
  bornc->add_option("--q", born.q, "Born probability")->required();
  bornc->add_option("--n", born.n, "Sequence length");
  bornc->add_option("--mmax", born.mmax, "Largest band index M");
  bornc->add_option("--nmax", born.nmax, "Largest band start N'");
  bornc->add_option("--policy", born.policy, "lex or seeded");
  bornc->add_option("--thresholds", born.thresholds, "Threshold config JSON");
  bornc->add_option("--csv-out", born.csv_out, "Write step,bit,running_mean here");
  bornc->add_option("--cert-out", born.cert_out, "Write the JSON certificate here");

  auto* ex = app.add_subcommand("expr", "Parse and evaluate a boolean expression");
  ex->add_option("expr", expr_text, "Expression, e.g. V[e0, !(e1)]")->required();
  ex->add_option("--atoms", atoms, "Atom count of the target algebra");
  ex->add_option("--pi", pis, "Assignment i:atom,atom,...");
  ex->add_flag("--check", check, "Check the prefilter equivalence over every prefilter");

  auto* ps = app.add_subcommand("psys", "Propositional-system logic");
  ps->add_option("system", file, "System JSON")->required();
  ps->add_option("what", sub, "reductive, conditions, ultra, tR or malley")
      ->required()
      ->check(CLI::IsMember({"reductive", "conditions", "ultra", "tR", "malley"}));
  ps->add_option("--weights", weights, "Atom weights for the measure table")->delimiter(',');

  auto* qu = app.add_subcommand("quantum", "Projection utilities");
  qu->add_option("what", sub, "asymmetry or system")->required()->check(CLI::IsMember({"asymmetry", "system"}));
  qu->add_option("file", file, "System JSON (for system)");
  qu->add_option("--dim", dim, "Dimension (for asymmetry)");

  auto* fo = app.add_subcommand("force", "Names, boolean values and the truth lemma");
  fo->add_option("poset", file, "Poset JSON")->required();
  fo->add_option("what", sub, "eval, bv or truth")->required()->check(CLI::IsMember({"eval", "bv", "truth"}));
  fo->add_option("arg", arg, "Name literal (eval) or sentence (bv)");
  fo->add_option("--count", count, "Generated sentences (truth)");
  fo->add_option("--ground-rank", ground_rank, "Ground universe holds HF sets of rank <= this");

  auto* co = app.add_subcommand("collapse", "Transitive collapse of a finite relation");
  co->add_option("file", file, "Relation JSON {\"nodes\": n, \"relation\": [[x,y],...]}");
  co->add_option("--nodes", nodes, "Node count");
  co->add_option("--edges", edges, "Edges x>y meaning x E y, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (cap_seconds < 0) {
    std::cerr << "error: --cap-seconds must be nonnegative\n";
    return kExitInput;
  }
  if (cap_seconds > 0) {
    std::thread([cap_seconds] {
      std::this_thread::sleep_for(std::chrono::duration<double>(cap_seconds));
      std::cerr << "refused: time cap of " << cap_seconds << " s exceeded\n";
      std::_Exit(kExitCap);
    }).detach();
  }

  try {
    Output o;
    if (*reg) o = cmd_reg(file);
    else if (*gen) o = cmd_generic(file, start, policy, seed);
    else if (*bornc) o = cmd_born(born, seed);
    else if (*ex) o = cmd_expr(expr_text, atoms, pis, check);
    else if (*ps) o = cmd_psys(file, sub, weights);
    else if (*qu) o = cmd_quantum(sub, file, dim);
    else if (*fo) {
      if (ground_rank > 4) throw CapRefusal("ground universe rank", 4);
      if ((sub == "eval" || sub == "bv") && arg.empty()) throw InputError("force " + sub + " needs an argument");
      o = cmd_force(file, sub, arg, count, ground_rank, seed);
    } else if (*co) o = cmd_collapse(file, nodes, edges);
    emit(o, format);
    std::cout.flush();
    std::_Exit(o.code);
  } catch (const CapRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitCap;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: bad number: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: value out of range: " << e.what() << '\n';
    return kExitInput;
  }
}
