#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tamelink/cohom.hpp"
#include "tamelink/json_io.hpp"
#include "tamelink/lie.hpp"
#include "tamelink/linking.hpp"
#include "tamelink/mild.hpp"
#include "tamelink/search.hpp"

namespace tamelink::certify {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct Consequence {
  std::string tag;
  std::string statement;
  friend bool operator==(const Consequence&, const Consequence&) = default;
};

inline const std::vector<std::string>& allowed_consequence_tags() {
  static const std::vector<std::string> tags = {
      "cd2", "scd3", "duality_group", "local_max_p_extension", "riemann_existence",
      "universal_norms_vanish"};
  return tags;
}

/// A self-contained, re-checkable record: the certified prime set, its
/// linking data, the rank witness, the series-oracle transcript, and the
/// labeled assumptions and consequences. Everything a verifier needs to
/// recompute is embedded.
struct Certificate {
  std::string version = "1";
  fields::FieldDescriptor field;
  u64 p = 0;
  std::vector<u64> primes;    // certified set, ascending
  std::vector<u64> requested; // set the caller asked about
  std::vector<u64> added;     // primes the augmentation contributed
  linking::LinkingData linking;
  mild::MildWitness witness;
  lie::SeriesVerdict oracle;
  std::vector<std::string> assumptions;
  std::vector<Consequence> consequences;
};

namespace detail {

inline std::vector<std::string> standard_assumptions(u64 p, u32 lie_degree,
                                                     const std::string& defect_note) {
  return {
      defect_note,
      "sign convention: the relation at q_i has initial form a_i*pi*xi_i + "
      "sum_j e[j][i]*[xi_i,xi_j]; verdicts depend only on zero patterns and ranks, "
      "which are convention-invariant",
      "series oracle checked through degree " + std::to_string(lie_degree) +
          "; strong freeness beyond that degree is not claimed",
      "discrete logs normalized by the smallest primitive root mod each prime (p = " +
          std::to_string(p) + ")",
  };
}

inline std::vector<Consequence> standard_consequences() {
  return {
      {"cd2", "the tame Galois group of the certified set has cohomological dimension 2"},
      {"scd3", "the strict cohomological dimension is 3"},
      {"duality_group",
       "the group is a duality group of dimension 2; the dualizing module is the p-torsion "
       "of the idele class group of the maximal extension"},
      {"local_max_p_extension",
       "at every prime q of the set, the ramified tower realizes the maximal p-extension of "
       "the local field, whose Galois group is generated by a Frobenius lift s and an inertia "
       "generator t subject to s t s^-1 = t^q"},
      {"universal_norms_vanish",
       "universal norms of units and S-units vanish along the tower"},
  };
}

} // namespace detail

/// Certifies the set directly when a rank witness exists, otherwise (given a
/// search domain) augments the set first. The oracle cross-check on the
/// reduced initial forms is always attached.
inline Certificate certify(const fields::FieldDescriptor& field, u64 p,
                           const std::vector<u64>& S,
                           const std::optional<search::SearchDomain>& dom,
                           u32 lie_degree = 6) {
  if (!field.is_rational())
    fail(errc::defect_assumption_unavailable,
         "certification needs the defect-0 input, pinned for Q only");
  if (p < 3 || !arith::is_prime(p)) fail(errc::precondition, "p must be an odd prime");
  if (S.empty()) fail(errc::precondition, "certification needs a nonempty prime set");

  Certificate cert;
  cert.field = field;
  cert.p = p;
  cert.requested = S;
  std::sort(cert.requested.begin(), cert.requested.end());

  const auto defect =
      cohom::h2_defect(field, p, fields::certified_prime_set(fields::rational_places(S), p));

  auto ld = linking::linking_data(cert.requested, p);
  auto found = mild::find_mild_witness(ld);
  if (found.witness) {
    cert.primes = cert.requested;
    cert.linking = std::move(ld);
    cert.witness = *found.witness;
  } else if (dom) {
    auto aug = search::augment_to_mild(cert.requested, p, *dom);
    cert.primes = aug.final_primes();
    cert.added = aug.t1;
    cert.linking = std::move(aug.final_linking);
    cert.witness = aug.witness;
  } else {
    fail(errc::not_certifiable,
         "no witness of this shape exists for the set, and no search domain was given");
  }

  const u32 n = static_cast<u32>(cert.primes.size());
  lie::HallBasis basis(n, std::max<u32>(2, lie_degree));
  const auto forms = mild::initial_forms(cert.linking, basis);
  std::vector<lie::Element> reduced;
  reduced.reserve(forms.size());
  for (const auto& f : forms) reduced.push_back(lie::reduce_mod_pi(f));
  cert.oracle = lie::strongly_free_oracle(basis, reduced, lie_degree);
  if (!cert.oracle.strongly_free)
    fail(errc::not_certifiable,
         "series oracle contradicts the rank witness; refusing to emit a certificate");

  cert.assumptions = detail::standard_assumptions(p, lie_degree, defect.assumption);
  cert.consequences = detail::standard_consequences();
  return cert;
}

inline json to_json(const Certificate& cert) {
  json consequences = json::array();
  for (const auto& c : cert.consequences)
    consequences.push_back(json{{"tag", c.tag}, {"statement", c.statement}});
  return json{{"version", cert.version},
              {"field", fields::to_string(cert.field)},
              {"p", cert.p},
              {"primes", cert.primes},
              {"origin", json{{"requested", cert.requested}, {"added", cert.added}}},
              {"linking", tamelink::to_json(cert.linking)},
              {"witness", tamelink::to_json(cert.witness)},
              {"oracle", tamelink::to_json(cert.oracle)},
              {"assumptions", cert.assumptions},
              {"consequences", consequences}};
}

/// Canonical serialized form: sorted keys, two-space indent, no floats,
/// trailing newline. Serialize-parse-serialize is byte-identical.
inline std::string canonical_json(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

inline Certificate certificate_from_json(const json& j) {
  try {
    Certificate cert;
    cert.version = j.at("version").get<std::string>();
    if (cert.version != "1") fail(errc::schema_mismatch, "unknown certificate version");
    cert.field = fields::parse_field(j.at("field").get<std::string>());
    cert.p = j.at("p").get<u64>();
    cert.primes = j.at("primes").get<std::vector<u64>>();
    cert.requested = j.at("origin").at("requested").get<std::vector<u64>>();
    cert.added = j.at("origin").at("added").get<std::vector<u64>>();
    cert.linking = linking_from_json(j.at("linking"));
    cert.witness = witness_from_json(j.at("witness"));
    cert.oracle = series_from_json(j.at("oracle"));
    cert.assumptions = j.at("assumptions").get<std::vector<std::string>>();
    for (const auto& c : j.at("consequences"))
      cert.consequences.push_back(
          {c.at("tag").get<std::string>(), c.at("statement").get<std::string>()});
    return cert;
  } catch (const json::exception& e) {
    fail(errc::schema_mismatch, std::string("malformed certificate: ") + e.what());
  }
}

inline Certificate load_certificate(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(errc::schema_mismatch, "certificate is not valid JSON");
  return certificate_from_json(j);
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
};

/// Recomputes everything a certificate claims: the linking data from scratch,
/// the witness matrix and rank under the stored ordering and split, and the
/// oracle series. lie_degree = 0 reruns at the stored cutoff; a larger value
/// extends the oracle check.
inline VerifyReport verify(const Certificate& cert, u32 lie_degree = 0) {
  VerifyReport report;
  report.check(cert.version == "1", "version tag");
  report.check(cert.field.is_rational(), "certificates are issued over Q");
  report.check(!cert.primes.empty(), "certified set must be nonempty");
  report.check(std::is_sorted(cert.primes.begin(), cert.primes.end()), "primes sorted");
  for (const auto& c : cert.consequences) {
    const auto& allowed = allowed_consequence_tags();
    report.check(std::find(allowed.begin(), allowed.end(), c.tag) != allowed.end(),
                 "consequence tag " + c.tag);
  }
  if (!report.ok) return report;

  linking::LinkingData recomputed;
  try {
    recomputed = linking::linking_data(cert.primes, cert.p);
  } catch (const error& e) {
    report.check(false, std::string("linking recomputation: ") + e.what());
    return report;
  }
  report.check(recomputed == cert.linking, "stored linking data reproduces from scratch");

  const auto cup = mild::linking_cup(recomputed);
  try {
    auto w = mild::mildkrit_check(cup, cert.witness.ordering, cert.witness.split_a);
    report.check(w.has_value(), "stored ordering and split still pass the rank criterion");
    if (w) {
      report.check(w->matrix == cert.witness.matrix, "witness matrix entries reproduce");
      report.check(w->rank == cert.witness.rank, "witness rank reproduces");
      report.check(w->rank == cup.m, "witness rank equals the relation count");
    }
  } catch (const error& e) {
    report.check(false, std::string("witness recheck: ") + e.what());
  }

  const u32 stored_degree = cert.oracle.checked_degree;
  const u32 run_degree = lie_degree == 0 ? stored_degree : lie_degree;
  if (run_degree > stored_degree)
    report.notes.push_back("oracle extended from degree " + std::to_string(stored_degree) +
                           " to " + std::to_string(run_degree));
  try {
    const u32 n = static_cast<u32>(cert.primes.size());
    lie::HallBasis basis(n, std::max<u32>(2, run_degree));
    const auto forms = mild::initial_forms(recomputed, basis);
    std::vector<lie::Element> reduced;
    for (const auto& f : forms) reduced.push_back(lie::reduce_mod_pi(f));
    const auto oracle = lie::strongly_free_oracle(basis, reduced, run_degree);
    for (u32 k = 0; k <= std::min(stored_degree, run_degree); ++k) {
      report.check(oracle.expected[k] == cert.oracle.expected[k],
                   "expected series coefficient at degree " + std::to_string(k));
      report.check(oracle.actual[k] == cert.oracle.actual[k],
                   "enveloping-algebra dimension at degree " + std::to_string(k));
    }
    report.check(oracle.strongly_free, "series identity holds through degree " +
                                           std::to_string(run_degree));
  } catch (const error& e) {
    report.check(false, std::string("oracle recheck: ") + e.what());
  }
  return report;
}

/// Transfers a certificate to an enlarged set when every added prime avoids
/// splitting completely in the certified elementary layer; the free
/// inertia-product presentation of the relative extension is then appended as
/// a consequence.
struct EnlargeOutcome {
  std::vector<search::EnlargeVerdict> verdicts;
  std::optional<Certificate> extended;
};

inline EnlargeOutcome enlarge(const Certificate& cert, const std::vector<u64>& Sprime,
                              u32 lie_degree = 6) {
  if (cert.primes.empty()) fail(errc::missing_certificate, "certificate has no prime set");
  EnlargeOutcome outcome;
  outcome.verdicts = search::enlarge_check(cert.primes, Sprime, cert.p);
  const bool all_extend = std::all_of(outcome.verdicts.begin(), outcome.verdicts.end(),
                                      [](const auto& v) { return v.extends; });
  if (all_extend && !outcome.verdicts.empty()) {
    Certificate ext = cert;
    std::string added_list;
    for (const auto& v : outcome.verdicts)
      added_list += (added_list.empty() ? "" : ",") + std::to_string(v.prime);
    ext.consequences.push_back(
        {"riemann_existence",
         "the extension by {" + added_list +
             "} is the free pro-p product of a bundle of inertia groups over the certified "
             "tower; the verdict transfers to the enlarged set"});
    ext.assumptions.push_back("enlargement by {" + added_list +
                              "}: none of the added primes splits completely in the certified "
                              "elementary layer; witness and oracle still refer to the core set");
    outcome.extended = std::move(ext);
  }
  return outcome;
}

} // namespace tamelink::certify
