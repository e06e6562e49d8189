// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "../support.hpp"

using namespace modalcert;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      if (pass) note << " FIRST FAILURE: " << why << ";";
      pass = false;
    }
  }
};

int failures = 0;

void report(int n, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  failures += !v.pass;
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << n << "] " << title << ":" << v.note.str() << std::endl;
}

std::pair<int, std::string> run_binary(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(MODALCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::vector<std::string> kFormats{"os", "lmf", "lmfm", "lmfstar", "ns", "pt", "ls"};

// Positions of the goal that evidence may name, including diamond bodies
// placed under each box.
void plain_positions(const ModalFormula& a, const Index& at, std::vector<std::pair<Index, ModalFormula>>& out) {
  out.push_back({at, a});
  switch (a.op()) {
    case ModalOp::Atom:
    case ModalOp::NAtom: break;
    case ModalOp::Box:
    case ModalOp::Dia: plain_positions(a.body(), Index::left(at), out); break;
    default:
      plain_positions(a.left(), Index::left(at), out);
      plain_positions(a.right(), Index::right(at), out);
  }
}

std::vector<Index> index_pool(const ModalFormula& a) {
  std::vector<std::pair<Index, ModalFormula>> plain;
  plain_positions(a, Index::root(), plain);
  std::vector<Index> boxes, pool;
  for (const auto& [i, f] : plain) {
    pool.push_back(i);
    if (f.op() == ModalOp::Box) boxes.push_back(i);
  }
  for (const auto& [i, f] : plain) {
    if (f.op() != ModalOp::Dia) continue;
    for (const auto& b : boxes) {
      std::vector<std::pair<Index, ModalFormula>> under;
      plain_positions(f.body(), Index::diaind(i, b), under);
      for (const auto& u : under) pool.push_back(u.first);
    }
  }
  return pool;
}

LmfCert random_tree(std::mt19937& rng, const std::vector<Index>& pool, int depth, int& budget) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> pct(0, 99);
  LmfCert n{pool[pick(rng)], std::nullopt, {}, {}};
  --budget;
  if (pct(rng) < 50) n.extra = pool[pick(rng)];
  if (budget <= 0 || pct(rng) < depth * 12) return n;
  int kids = pct(rng) < 30 ? 2 : 1;
  for (int k = 0; k < kids && budget > 0; ++k) n.children.push_back(random_tree(rng, pool, depth + 1, budget));
  return n;
}

void collect_nodes(LmfCert& n, std::vector<LmfCert*>& out) {
  out.push_back(&n);
  for (auto& k : n.children) collect_nodes(k, out);
}

LmfCert mutate(std::mt19937& rng, LmfCert c, const std::vector<Index>& pool) {
  std::uniform_int_distribution<int> times(1, 3), kind(0, 4);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int t = times(rng); t > 0; --t) {
    std::vector<LmfCert*> nodes;
    collect_nodes(c, nodes);
    std::uniform_int_distribution<std::size_t> at(0, nodes.size() - 1);
    LmfCert& n = *nodes[at(rng)];
    switch (kind(rng)) {
      case 0: n.index = pool[pick(rng)]; break;
      case 1: n.extra = pool[pick(rng)]; break;
      case 2: std::swap(n.extra, nodes[at(rng)]->extra); break;
      case 3:
        if (!n.children.empty()) n.children.pop_back();
        break;
      default:
        if (!n.children.empty()) n.children.push_back(n.children.front());
    }
  }
  return c;
}

int node_total(const ModalFormula& a) {
  switch (a.op()) {
    case ModalOp::Atom:
    case ModalOp::NAtom: return 1;
    case ModalOp::Box:
    case ModalOp::Dia: return 1 + node_total(a.body());
    default: return 1 + node_total(a.left()) + node_total(a.right());
  }
}

std::map<std::string, int> decide_multiset(const ProofTrace& t) {
  std::map<std::string, int> m;
  for (const auto& e : t) {
    if (e.kind == EventKind::Decide) ++m[e.index.str()];
  }
  return m;
}

void fixture_suite(Verdict& v) {
  for (const auto& f : kFormats) {
    auto t0 = Clock::now();
    auto r = cli({"check", fixture_path("axiomK." + f + ".json")});
    double dt = seconds_since(t0);
    v.require(r.code == 0, f + " exit " + std::to_string(r.code));
    v.require(dt < 1.0, f + " took " + std::to_string(dt) + "s");
    v.note << " " << f << "=" << r.code << "(" << static_cast<int>(dt * 1000) << "ms)";
  }
  auto ev = load_fixture("axiomK.lmf.json");
  auto r = check_lmf(std::get<LmfCert>(ev.proof), certification_goal(ev.formula));
  int decides = count(r.trace, EventKind::Decide), rel = 0, prop = 0;
  for (const auto& e : r.trace) {
    if (e.kind != EventKind::Init) continue;
    (e.index.op() == IndexOp::RelIdx ? rel : prop)++;
  }
  v.require(r.accepted, "lmf rejected");
  v.require(decides == 8, "decides " + std::to_string(decides));
  v.require(rel == 2 && prop == 2, "inits " + std::to_string(rel) + "+" + std::to_string(prop));
  v.note << "; lmf trace: " << decides << " decides, " << prop << " propositional + " << rel << " relational inits";
}

void corruption_suite(Verdict& v) {
  std::map<std::string, int> per_format;
  int total = 0;
  for (const auto& f : kFormats) {
    for (const auto& kind : {"wrong-extra", "dangling-diaind", "swapped-leaf-extras", "missing-branch", "skipped-box",
                             "swapped-group", "shrunk-present", "wrong-future", "missing-diamond",
                             "diamond-without-box", "wrong-sequent", "target-outside-child"}) {
      std::string path = fixture_path(std::string("corrupt/axiomK.") + f + "." + kind + ".json");
      if (read_file(path).empty()) continue;
      auto r = cli({"check", path});
      v.require(r.code == 1, path + " exit " + std::to_string(r.code));
      ++per_format[f];
      ++total;
    }
  }
  for (const auto& f : kFormats) v.require(per_format[f] >= 5, f + " has only " + std::to_string(per_format[f]));
  v.note << " " << total << " corruptions over " << per_format.size() << " formats, all exit 1";
}

void search_vs_oracle(Verdict& v) {
  auto t0 = Clock::now();
  auto all = formulas_up_to(4);
  int valid = 0, mismatches = 0;
  for (const auto& a : all) {
    bool oracle = decide_validity(a).valid();
    bool found = search_lmf(a, {16, 100'000}).has_value();
    valid += oracle;
    if (oracle != found) {
      if (mismatches == 0) v.require(false, print_formula(a));
      ++mismatches;
    }
  }
  double dt = seconds_since(t0);
  v.require(dt < 300.0, "took " + std::to_string(dt) + "s");
  v.note << " " << all.size() << " formulas, " << valid << " valid, " << mismatches << " mismatches, "
         << static_cast<int>(dt) << "s";
}

void soundness_fuzz(Verdict& v) {
  std::mt19937 rng(2024);
  auto k = axiom_k();
  auto fixture = std::get<LmfCert>(load_fixture("axiomK.lmf.json").proof);

  // Half the formulas share the shape of axiom K so the fixture's indices
  // stay meaningful under mutation.
  std::vector<ModalFormula> shaped, other;
  const std::vector<ModalFormula> lits{ModalFormula::atom("p"), ModalFormula::natom("p"), ModalFormula::atom("q"),
                                       ModalFormula::natom("q")};
  for (const auto& a : lits) {
    for (const auto& b : lits) {
      for (const auto& c : lits) {
        for (const auto& d : lits) {
          auto f = ModalFormula::disj(ModalFormula::dia(ModalFormula::conj(a, b)),
                                      ModalFormula::disj(ModalFormula::dia(c), ModalFormula::box(d)));
          if (small_countermodel_exists(f, 3)) shaped.push_back(f);
        }
      }
    }
  }
  std::shuffle(shaped.begin(), shaped.end(), rng);
  shaped.resize(10);
  while (other.size() < 10) {
    auto f = random_formula(rng, 8, {"p", "q"});
    if (connective_count(f) < 3 || dia_count(f) == 0 || modal_depth(f) == 0) continue;
    if (small_countermodel_exists(f, 3)) other.push_back(f);
  }

  int certs = 0, accepted = 0, lifted = 0;
  auto try_cert = [&](const ModalFormula& a, const LmfCert& c) {
    ++certs;
    v.require(!decide_validity(a).valid(), "oracle says valid: " + print_formula(a));
    auto goal = certification_goal(a);
    if (check_lmf(c, goal).accepted) {
      ++accepted;
      v.require(false, "accepted for " + print_formula(a));
    }
    try {
      auto star = lift_to_star(singleton_groups(c), a);
      ++lifted;
      if (check_star(star, goal).accepted) {
        ++accepted;
        v.require(false, "star accepted for " + print_formula(a));
      }
    } catch (const AdapterError&) {
    }
  };
  for (const auto& a : shaped) {
    auto pool = index_pool(a);
    try_cert(a, fixture);
    for (int i = 1; i < 10; ++i) try_cert(a, mutate(rng, fixture, pool));
  }
  for (const auto& a : other) {
    auto pool = index_pool(a);
    for (int i = 0; i < 10; ++i) {
      int budget = 14;
      try_cert(a, random_tree(rng, pool, 0, budget));
    }
  }
  v.require(certs == 200, "certificate count " + std::to_string(certs));
  v.note << " " << certs << " certificates (+" << lifted << " lifted to lmfstar) over " << shaped.size() + other.size()
         << " invalid formulas, " << accepted << " accepted";
}

void conservativity(Verdict& v) {
  std::vector<std::pair<std::string, StarCert>> certs{
      {"lmfstar fixture", std::get<StarCert>(load_fixture("axiomK.lmfstar.json").proof)},
      {"os fixture", os_to_star(std::get<OsNode>(load_fixture("axiomK.os.json").proof), axiom_k())}};
  auto goal = certification_goal(axiom_k());
  for (const auto& [name, c] : certs) {
    auto star = check_star(c, goal);
    v.require(star.accepted, name + " rejected by lmfstar");
    auto m = star_to_multifoc(c).first;
    auto multi = check_lmfm(m, goal);
    v.require(multi.accepted, name + " rejected by lmfm");
    auto single = check_lmf(erase_groups(m), goal);
    v.require(single.accepted, name + " rejected by lmf");
    v.require(decide_multiset(star.trace) == decide_multiset(multi.trace), name + " lmfm decides differ");
    v.require(decide_multiset(star.trace) == decide_multiset(single.trace), name + " lmf decides differ");
  }
  v.note << " " << certs.size() << " star certificates checked at all three layers";
}

void translation_identities(Verdict& v) {
  std::mt19937 rng(20);
  int n = 0, largest = 0;
  while (n < 1000) {
    auto a = random_formula(rng, 19);
    int size = node_total(a);
    if (size > 20) continue;
    ++n;
    largest = std::max(largest, size);
    v.require(erase_delays(polos(a)) == a, "delay erasure: " + print_formula(a));
    v.require(negate_nnf(negate_nnf(a)) == a, "involution: " + print_formula(a));
  }
  v.note << " " << n << " formulas, largest size " << largest;
}

void os_to_star_golden(Verdict& v) {
  auto r = cli({"translate", fixture_path("axiomK.os.json"), "--to", "lmfstar"});
  v.require(r.code == 0, "exit " + std::to_string(r.code));
  auto want = read_file(fixture_path("axiomK.lmfstar.json"));
  v.require(r.out == want, "output differs from the lmfstar fixture");
  v.require(parse_evidence(r.out) == load_fixture("axiomK.lmfstar.json"), "structural mismatch");
  v.note << " byte-identical (" << r.out.size() << " bytes)";
}

void cli_contract(Verdict& v) {
  std::string ok = fixture_path("axiomK.lmf.json");
  std::vector<std::pair<int, std::pair<std::string, std::string>>> cases{
      {0, {"check " + ok, ""}},
      {1, {"check " + fixture_path("corrupt/axiomK.lmf.wrong-extra.json"), ""}},
      {2, {"check " + fixture_path("no-such-file.json"), ""}},
      {3, {"check " + ok, "MODALCERT_KERNEL_LIMIT=5"}},
  };
  for (const auto& [want, cmd] : cases) {
    int got = run_binary(cmd.first, cmd.second).first;
    v.require(got == want, cmd.first + " exit " + std::to_string(got));
    v.note << " " << got;
  }
  for (const auto& f : kFormats) {
    auto a = run_binary("trace " + fixture_path("axiomK." + f + ".json"));
    auto b = run_binary("trace " + fixture_path("axiomK." + f + ".json"));
    v.require(a.first == 0 && !a.second.empty(), f + " trace failed");
    v.require(a == b, f + " traces differ");
  }
  v.note << "; traces stable for " << kFormats.size() << " fixtures";
}

}  // namespace

int main() {
  report(1, "axiom-K fixtures certify", fixture_suite);
  report(2, "corruptions rejected", corruption_suite);
  report(3, "search agrees with oracle up to 4 connectives", search_vs_oracle);
  report(4, "soundness fuzzing", soundness_fuzz);
  report(5, "layer conservativity", conservativity);
  report(6, "translation identities", translation_identities);
  report(7, "os to lmfstar golden", os_to_star_golden);
  report(8, "cli exit codes and stable traces", cli_contract);
  return failures == 0 ? 0 : 1;
}
