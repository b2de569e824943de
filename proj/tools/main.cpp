// Command-line front end: computes field invariants, cohomology dimension
// tables, linking matrices and mildness witnesses for tame prime sets, runs
// the prime-augmentation construction, and emits / re-verifies certificates
// as canonical JSON.
//
// Exit codes: 0 = certified / true, 2 = not certifiable / false, 1 = error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tamelink/tamelink.hpp"

namespace {

using tamelink::json;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_negative = 2;

struct CommonOptions {
  std::string field = "Q";
  u64 p = 3;
  std::vector<u64> primes;
  u64 bound = 0; // 0: no search domain
  u32 lie_degree = 6;
  unsigned workers = 1;
  std::string out;
  std::string config;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_primes) {
  cmd->add_option("--field", opt.field, "base field: Q, Q(i) or Q(sqrt-<d>)");
  cmd->add_option("--p", opt.p, "the prime p");
  auto* primes = cmd->add_option("--primes", opt.primes, "comma-separated prime set")
                     ->delimiter(',');
  if (needs_primes) primes->required();
  cmd->add_option("--bound", opt.bound, "search bound for new primes");
  cmd->add_option("--lie-degree", opt.lie_degree, "series oracle cutoff degree");
  cmd->add_option("--workers", opt.workers, "parallel workers for the prime search");
  cmd->add_option("--out", opt.out, "write the JSON result to this file");
  cmd->add_option("--config", opt.config, "JSON config file with bound/workers/lie_degree");
}

void apply_config(CommonOptions& opt) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) throw tamelink::error(tamelink::errc::precondition, "cannot open " + opt.config);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw tamelink::error(tamelink::errc::schema_mismatch, "config is not valid JSON");
  if (j.contains("bound") && opt.bound == 0) opt.bound = j["bound"].get<u64>();
  if (j.contains("workers") && opt.workers == 1) opt.workers = j["workers"].get<unsigned>();
  if (j.contains("lie_degree") && opt.lie_degree == 6) opt.lie_degree = j["lie_degree"].get<u32>();
}

void emit(const json& j, const CommonOptions& opt) {
  const std::string text = j.dump(2) + "\n";
  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary);
    out << text;
  } else {
    std::cout << text;
  }
}

void emit_text(const std::string& text, const CommonOptions& opt) {
  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary);
    out << text;
  } else {
    std::cout << text;
  }
}

tamelink::search::SearchDomain domain_of(const CommonOptions& opt) {
  tamelink::search::SearchDomain dom;
  dom.bound = opt.bound;
  dom.workers = opt.workers;
  return dom;
}

int run(int argc, char** argv) {
  CLI::App app{"arithmetic of tame prime sets: linking, mildness, certificates"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* invariants = app.add_subcommand("invariants", "field invariants at p");
  add_common(invariants, opt, false);

  auto* cohomology = app.add_subcommand("cohomology", "dimension table of the open curve");
  add_common(cohomology, opt, false);

  auto* linking = app.add_subcommand("linking", "mod-p linking data of a prime set");
  add_common(linking, opt, true);

  auto* check_mild = app.add_subcommand("check-mild", "search for a rank witness");
  add_common(check_mild, opt, true);

  auto* certify = app.add_subcommand("certify", "emit a certificate, augmenting if allowed");
  add_common(certify, opt, true);

  auto* augment = app.add_subcommand("augment", "run the prime-augmentation construction");
  add_common(augment, opt, true);

  auto* verify = app.add_subcommand("verify", "re-verify a certificate from scratch");
  std::string cert_path;
  verify->add_option("certificate", cert_path, "certificate JSON file")->required();
  add_common(verify, opt, false);

  auto* classify = app.add_subcommand("classify-degenerate", "degenerate one-prime classification");
  add_common(classify, opt, true);

  auto* minimize = app.add_subcommand("minimize", "drop places that cannot ramify");
  add_common(minimize, opt, true);

  CLI11_PARSE(app, argc, argv);
  apply_config(opt);

  const auto field = tamelink::fields::parse_field(opt.field);

  if (invariants->parsed()) {
    emit(tamelink::to_json(tamelink::fields::invariants(field, opt.p)), opt);
    return exit_ok;
  }

  if (cohomology->parsed()) {
    tamelink::fields::PrimeSet set;
    if (field.is_rational()) {
      set = tamelink::fields::certified_prime_set(
          tamelink::fields::rational_places(opt.primes), opt.p);
    } else {
      // places over a quadratic field: look them up among the admissible ones
      for (u64 q : opt.primes) {
        bool found = false;
        for (const auto& pl : tamelink::fields::admissible_places(field, opt.p, q)) {
          if (pl.residue_prime == q) {
            set.places.push_back(pl);
            found = true;
          }
        }
        if (!found)
          throw tamelink::error(tamelink::errc::not_admissible,
                                "no admissible place over " + std::to_string(q));
      }
    }
    emit(tamelink::to_json(tamelink::cohom::global_dimensions(field, opt.p, set)), opt);
    return exit_ok;
  }

  if (linking->parsed()) {
    emit(tamelink::to_json(tamelink::linking::linking_data(opt.primes, opt.p)), opt);
    return exit_ok;
  }

  if (check_mild->parsed()) {
    const auto ld = tamelink::linking::linking_data(opt.primes, opt.p);
    const auto found = tamelink::mild::find_mild_witness(ld);
    if (!found.witness) {
      json j{{"witness", nullptr},
             {"note", "no witness of this shape (the criterion is sufficient, not necessary)"},
             {"bipartitions_examined", found.examined},
             {"exhaustive", found.exhaustive}};
      emit(j, opt);
      return exit_negative;
    }
    const u32 n = static_cast<u32>(ld.size());
    tamelink::lie::HallBasis basis(n, std::max<u32>(2, opt.lie_degree));
    const auto forms = tamelink::mild::initial_forms(ld, basis);
    std::vector<tamelink::lie::Element> reduced;
    for (const auto& f : forms) reduced.push_back(tamelink::lie::reduce_mod_pi(f));
    const auto oracle = tamelink::lie::strongly_free_oracle(basis, reduced, opt.lie_degree);
    json j{{"witness", tamelink::to_json(*found.witness)},
           {"oracle", tamelink::to_json(oracle)},
           {"bipartitions_examined", found.examined}};
    emit(j, opt);
    return oracle.strongly_free ? exit_ok : exit_negative;
  }

  if (certify->parsed()) {
    std::optional<tamelink::search::SearchDomain> dom;
    if (opt.bound > 0) dom = domain_of(opt);
    try {
      const auto cert = tamelink::certify::certify(field, opt.p, opt.primes, dom, opt.lie_degree);
      emit_text(tamelink::certify::canonical_json(cert), opt);
      return exit_ok;
    } catch (const tamelink::error& e) {
      if (e.code() == tamelink::errc::not_certifiable) {
        std::cerr << e.what() << "\n";
        return exit_negative;
      }
      throw;
    }
  }

  if (augment->parsed()) {
    if (opt.bound == 0)
      throw tamelink::error(tamelink::errc::precondition, "augment needs --bound");
    const auto result = tamelink::search::augment_to_mild(opt.primes, opt.p, domain_of(opt));
    emit(tamelink::to_json(result), opt);
    return exit_ok;
  }

  if (verify->parsed()) {
    std::ifstream in(cert_path, std::ios::binary);
    if (!in)
      throw tamelink::error(tamelink::errc::missing_certificate, "cannot open " + cert_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto cert = tamelink::certify::load_certificate(text);
    const auto report =
        tamelink::certify::verify(cert, opt.lie_degree == 6 ? 0 : opt.lie_degree);
    json j{{"ok", report.ok}, {"notes", report.notes}};
    emit(j, opt);
    return report.ok ? exit_ok : exit_negative;
  }

  if (classify->parsed()) {
    if (opt.primes.size() != 1)
      throw tamelink::error(tamelink::errc::precondition,
                            "classify-degenerate takes exactly one prime");
    const u64 q = opt.primes.front();
    tamelink::fields::Place place;
    bool found = false;
    for (const auto& pl : tamelink::fields::admissible_places(field, opt.p, q)) {
      if (pl.residue_prime == q) {
        place = pl;
        found = true;
      }
    }
    if (!found)
      throw tamelink::error(tamelink::errc::not_admissible,
                            "no admissible place over " + std::to_string(q));
    const auto verdict = tamelink::cohom::classify_degenerate(field, opt.p, place);
    emit(tamelink::to_json(verdict), opt);
    return verdict.degenerate ? exit_ok : exit_negative;
  }

  if (minimize->parsed()) {
    const auto result =
        tamelink::fields::minimize(tamelink::fields::rational_places(opt.primes), opt.p);
    emit(tamelink::to_json(result), opt);
    return exit_ok;
  }

  return exit_error;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tamelink::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
}
