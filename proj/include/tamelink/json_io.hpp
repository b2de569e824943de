#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "tamelink/cohom.hpp"
#include "tamelink/fields.hpp"
#include "tamelink/lie.hpp"
#include "tamelink/linking.hpp"
#include "tamelink/mild.hpp"
#include "tamelink/search.hpp"

namespace tamelink {

// nlohmann::json keeps object keys sorted, which is what makes every dump of
// the same data byte-identical. Nothing here may emit floats.
using json = nlohmann::json;
using u64 = std::uint64_t;

inline json to_json(const fields::FieldInvariants& inv) {
  return json{{"r1", inv.r1},
              {"r2", inv.r2},
              {"r", inv.r},
              {"delta", inv.delta},
              {"class_number", inv.class_number},
              {"p_class_trivial", inv.p_class_trivial},
              {"unit_mod_p_dim", inv.unit_mod_p_dim}};
}

inline json to_json(const cohom::DimensionTable& t) {
  return json{{"h0", t.h0},       {"h1", t.h1},
              {"h2", t.h2},       {"h3", t.h3},
              {"euler", t.euler}, {"dim_VS", t.dim_VS},
              {"dim_sha2", t.dim_sha2}, {"theta", t.theta}};
}

inline json to_json(const cohom::DegenerateVerdict& v) {
  return json{{"degenerate", v.degenerate},
              {"case", cohom::to_string(v.case_label)},
              {"reason", v.reason}};
}

inline json to_json(const fields::MinimizeResult& r) {
  json discarded = json::array();
  for (const auto& d : r.discarded)
    discarded.push_back(json{{"residue_prime", d.place.residue_prime},
                             {"splitting", fields::to_string(d.place.splitting)},
                             {"norm", d.place.norm},
                             {"reason", d.reason}});
  json kept = json::array();
  for (const auto& pl : r.set.places)
    kept.push_back(json{{"residue_prime", pl.residue_prime},
                        {"degree", pl.degree},
                        {"norm", pl.norm},
                        {"splitting", fields::to_string(pl.splitting)}});
  return json{{"kept", kept}, {"discarded", discarded}};
}

inline json to_json(const linking::LinkingData& ld) {
  json e = json::array();
  for (std::size_t i = 0; i < ld.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ld.size(); ++j) {
      if (i == j)
        row.push_back(nullptr);
      else
        row.push_back(ld.e[i][j]);
    }
    e.push_back(row);
  }
  return json{{"p", ld.p}, {"primes", ld.primes}, {"e", e}, {"a", ld.a}, {"roots", ld.roots}};
}

inline linking::LinkingData linking_from_json(const json& j) {
  linking::LinkingData ld;
  ld.p = j.at("p").get<u64>();
  ld.primes = j.at("primes").get<std::vector<u64>>();
  ld.a = j.at("a").get<std::vector<u64>>();
  ld.roots = j.at("roots").get<std::vector<u64>>();
  const auto& e = j.at("e");
  ld.e.assign(ld.primes.size(), std::vector<u64>(ld.primes.size(), 0));
  if (e.size() != ld.primes.size()) fail(errc::schema_mismatch, "linking matrix shape");
  for (std::size_t i = 0; i < ld.primes.size(); ++i) {
    if (e[i].size() != ld.primes.size()) fail(errc::schema_mismatch, "linking matrix shape");
    for (std::size_t k = 0; k < ld.primes.size(); ++k) {
      if (i == k) {
        if (!e[i][k].is_null()) fail(errc::schema_mismatch, "linking diagonal must be null");
      } else {
        ld.e[i][k] = e[i][k].get<u64>();
      }
    }
  }
  return ld;
}

inline json to_json(const mild::MildWitness& w) {
  return json{{"ordering", w.ordering}, {"a", w.split_a}, {"matrix", w.matrix}, {"rank", w.rank}};
}

inline mild::MildWitness witness_from_json(const json& j) {
  mild::MildWitness w;
  w.ordering = j.at("ordering").get<std::vector<mild::u32>>();
  w.split_a = j.at("a").get<mild::u32>();
  w.matrix = j.at("matrix").get<std::vector<std::vector<u64>>>();
  w.rank = j.at("rank").get<mild::u32>();
  return w;
}

inline json to_json(const lie::SeriesVerdict& v) {
  return json{{"strongly_free", v.strongly_free},
              {"checked_degree", v.checked_degree},
              {"expected", v.expected},
              {"actual", v.actual}};
}

inline lie::SeriesVerdict series_from_json(const json& j) {
  lie::SeriesVerdict v;
  v.strongly_free = j.at("strongly_free").get<bool>();
  v.checked_degree = j.at("checked_degree").get<lie::u32>();
  v.expected = j.at("expected").get<std::vector<lie::i64>>();
  v.actual = j.at("actual").get<std::vector<lie::i64>>();
  return v;
}

inline json to_json(const search::FindPrimeResult& r) {
  json transcript = json::array();
  for (const auto& rec : r.transcript)
    transcript.push_back(json{
        {"candidate", rec.candidate}, {"accepted", rec.accepted}, {"reason", rec.reason}});
  return json{{"prime", r.prime},
              {"conditions", r.conditions},
              {"transcript", transcript},
              {"total_candidates", r.total_candidates}};
}

inline json to_json(const search::AugmentationResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back(json{{"label", s.label}, {"outcome", to_json(s.outcome)}});
  return json{{"t1", r.t1},
              {"steps", steps},
              {"linking", to_json(r.final_linking)},
              {"witness", to_json(r.witness)}};
}

inline json to_json(const std::vector<search::EnlargeVerdict>& verdicts) {
  json out = json::array();
  for (const auto& v : verdicts)
    out.push_back(json{{"prime", v.prime}, {"extends", v.extends}, {"reason", v.reason}});
  return out;
}

} // namespace tamelink
