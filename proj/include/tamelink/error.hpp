#pragma once

#include <stdexcept>
#include <string>

namespace tamelink {

/// Failure conditions surfaced by the library. Each value corresponds to a
/// documented refusal of an operation, not to a programming error.
enum class errc {
  precondition,
  not_admissible,
  divisor_conflict,
  bad_residue,
  not_squarefree,
  unsupported_assumption,
  not_computable,
  out_of_scope,
  equal_primes,
  member_of_s,
  resource_limit,
  degree_overflow,
  inhomogeneous_relation,
  wrong_degree,
  degenerate_relation,
  incomplete_cup_data,
  budget_exceeded,
  not_found_within_bound,
  defect_assumption_unavailable,
  missing_certificate,
  schema_mismatch,
  not_certifiable,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::precondition: return "Precondition";
    case errc::not_admissible: return "NotAdmissible";
    case errc::divisor_conflict: return "DivisorConflict";
    case errc::bad_residue: return "BadResidue";
    case errc::not_squarefree: return "NotSquarefree";
    case errc::unsupported_assumption: return "UnsupportedAssumption";
    case errc::not_computable: return "NotComputable";
    case errc::out_of_scope: return "OutOfScope";
    case errc::equal_primes: return "EqualPrimes";
    case errc::member_of_s: return "MemberOfS";
    case errc::resource_limit: return "ResourceLimit";
    case errc::degree_overflow: return "DegreeOverflow";
    case errc::inhomogeneous_relation: return "InhomogeneousRelation";
    case errc::wrong_degree: return "WrongDegree";
    case errc::degenerate_relation: return "DegenerateRelation";
    case errc::incomplete_cup_data: return "IncompleteCupData";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_found_within_bound: return "NotFoundWithinBound";
    case errc::defect_assumption_unavailable: return "DefectAssumptionUnavailable";
    case errc::missing_certificate: return "MissingCertificate";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::not_certifiable: return "NotCertifiable";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace tamelink
