#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modalcert/adapters.hpp"
#include "modalcert/evidence_io.hpp"
#include "modalcert/formula_text.hpp"
#include "modalcert/layers.hpp"
#include "modalcert/oracle.hpp"
#include "modalcert/search.hpp"

namespace modalcert {

enum ExitCode : int { kCertified = 0, kRejected = 1, kInputError = 2, kInternalError = 3 };

struct Outcome {
  bool accepted = false;
  ProofTrace trace;
  std::string layer;
};

/// Adapts the evidence to its native layer and runs the kernel on it.
inline Outcome certify(const EvidenceFile& ev, KernelOptions opts) {
  PolFormula goal = certification_goal(ev.formula);
  auto lmf = [&](const LmfCert& c) {
    auto r = check_lmf(c, goal, opts);
    return Outcome{r.accepted, r.trace, "lmf"};
  };
  auto star = [&](const StarCert& c) {
    auto r = check_star(c, goal, opts);
    return Outcome{r.accepted, r.trace, "lmfstar"};
  };
  switch (ev.format) {
    case Format::Ls:
    case Format::Lmf: return lmf(ls_to_lmf(std::get<LmfCert>(ev.proof), ev.formula));
    case Format::Pt: return lmf(pt_to_lmf(std::get<LmfCert>(ev.proof), ev.formula).first);
    case Format::Ns: return lmf(ns_to_lmf(std::get<NsNode>(ev.proof), ev.formula));
    case Format::Lmfm: {
      const auto& c = std::get<LmfmCert>(ev.proof);
      validate_certificate(c, ev.formula);
      auto r = check_lmfm(c, goal, opts);
      return Outcome{r.accepted, r.trace, "lmfm"};
    }
    case Format::LmfStar: {
      const auto& c = std::get<StarCert>(ev.proof);
      validate_certificate(c, ev.formula);
      return star(c);
    }
    case Format::Os: return star(os_to_star(std::get<OsNode>(ev.proof), ev.formula));
  }
  throw std::logic_error("certify: bad format");
}

/// Re-expresses the evidence as a certificate of the requested layer.
inline EvidenceFile translate(const EvidenceFile& ev, Format to) {
  if (to != Format::Lmf && to != Format::Lmfm && to != Format::LmfStar) {
    throw InputError("translation target must be lmf, lmfm or lmfstar");
  }
  std::optional<LmfCert> lmf;
  std::optional<LmfmCert> lmfm;
  std::optional<StarCert> star;
  switch (ev.format) {
    case Format::Ls:
    case Format::Lmf: lmf = ls_to_lmf(std::get<LmfCert>(ev.proof), ev.formula); break;
    case Format::Pt: lmf = pt_to_lmf(std::get<LmfCert>(ev.proof), ev.formula).first; break;
    case Format::Ns: lmf = ns_to_lmf(std::get<NsNode>(ev.proof), ev.formula); break;
    case Format::Lmfm:
      lmfm = std::get<LmfmCert>(ev.proof);
      validate_certificate(*lmfm, ev.formula);
      break;
    case Format::LmfStar:
      star = std::get<StarCert>(ev.proof);
      validate_certificate(*star, ev.formula);
      break;
    case Format::Os: star = os_to_star(std::get<OsNode>(ev.proof), ev.formula); break;
  }
  EvidenceFile out{1, to, ev.formula, {}};
  if (to == Format::Lmf) {
    out.proof = lmf ? *lmf : lmfm ? erase_groups(*lmfm) : erase_decorations(*star);
  } else if (to == Format::Lmfm) {
    out.proof = lmfm ? *lmfm : lmf ? singleton_groups(*lmf) : star_to_multifoc(*star).first;
  } else {
    out.proof = star ? *star : lift_to_star(lmfm ? *lmfm : singleton_groups(*lmf), ev.formula);
  }
  return out;
}

namespace detail {

inline EvidenceFile load_evidence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_evidence(buf.str());
}

inline SearchBudget parse_budget(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InputError("budget must look like D,N");
  try {
    std::size_t used1 = 0, used2 = 0;
    std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    int d = std::stoi(a, &used1);
    long n = std::stol(b, &used2);
    if (used1 != a.size() || used2 != b.size()) throw InputError("budget must look like D,N");
    return {d, n};
  } catch (const std::logic_error&) {
    throw InputError("budget must look like D,N");
  }
}

inline int count_decides(const ProofTrace& t) {
  int n = 0;
  for (const auto& e : t) n += e.kind == EventKind::Decide ? 1 : 0;
  return n;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify modal logic K proofs against a focused sequent kernel", "modalcert"};
  app.require_subcommand(1);

  std::string file, formula_text, to = "lmf", budget_text = "16,100000";
  bool show_trace = false, oracle = false;

  auto* check_cmd = app.add_subcommand("check", "Check an evidence file");
  check_cmd->add_option("file", file, "Evidence JSON file")->required();
  check_cmd->add_flag("--trace", show_trace, "Print the kernel trace");
  check_cmd->add_flag("--oracle-validate", oracle, "Cross-check the verdict against the Kripke oracle");

  auto* translate_cmd = app.add_subcommand("translate", "Emit the evidence as a layer certificate");
  translate_cmd->add_option("file", file, "Evidence JSON file")->required();
  translate_cmd->add_option("--to", to, "Target layer")->check(CLI::IsMember({"lmf", "lmfm", "lmfstar"}))->required();

  auto* search_cmd = app.add_subcommand("search", "Search for an lmf certificate");
  search_cmd->add_option("formula", formula_text, "Formula text")->required();
  search_cmd->add_option("--budget", budget_text, "Maximum decides per branch and kernel steps, as D,N");

  auto* trace_cmd = app.add_subcommand("trace", "Check an evidence file and print its trace");
  trace_cmd->add_option("file", file, "Evidence JSON file")->required();

  std::vector<std::string> argv_store{"modalcert"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kCertified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    KernelOptions opts{kernel_limit_from_env()};
    if (*check_cmd || *trace_cmd) {
      EvidenceFile ev = detail::load_evidence(file);
      Outcome o = certify(ev, opts);
      if (*trace_cmd) {
        if (!o.accepted) {
          err << "rejected: the kernel found no proof following the evidence\n";
          return kRejected;
        }
        out << format_trace(o.trace);
        return kCertified;
      }
      if (oracle) {
        ValidityResult v = decide_validity(ev.formula, limit_from_env("MODALCERT_ORACLE_LIMIT", kDefaultOracleLimit));
        if (o.accepted && !v.valid()) {
          err << "internal error: evidence certified a formula the oracle falsifies at world "
              << v.countermodel->world << "\n";
          return kInternalError;
        }
      }
      if (!o.accepted) {
        err << "rejected: the kernel found no proof following the evidence\n";
        return kRejected;
      }
      if (show_trace) out << format_trace(o.trace);
      out << "certified: " << print_formula(ev.formula) << " (" << format_name(ev.format) << " via " << o.layer
          << ", " << detail::count_decides(o.trace) << " decides)\n";
      return kCertified;
    }
    if (*translate_cmd) {
      EvidenceFile ev = detail::load_evidence(file);
      out << print_evidence(translate(ev, *parse_format(to)));
      return kCertified;
    }
    if (*search_cmd) {
      ModalFormula f = parse_formula(formula_text);
      auto cert = search_lmf(f, detail::parse_budget(budget_text));
      if (!cert) {
        err << "not-found: no certificate within budget " << budget_text << "\n";
        return kRejected;
      }
      out << print_evidence(EvidenceFile{1, Format::Lmf, f, *cert});
      return kCertified;
    }
  } catch (const AdapterError& e) {
    err << "rejected: " << e.what() << "\n";
    return kRejected;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const LimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace modalcert
