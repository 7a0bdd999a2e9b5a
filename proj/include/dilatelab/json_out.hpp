#pragma once

// JSON views of ledgers, reports, and search records. Every mathematical
// quantity is a decimal string (rationals as "p/q"), sets and tuples use the
// text literal formats, inequalities are {name, lhs, relation, rhs, holds}.

#include <json.hpp>

#include "dilatelab/bignum.hpp"
#include "dilatelab/bounds.hpp"
#include "dilatelab/residue.hpp"
#include "dilatelab/search.hpp"
#include "dilatelab/verify.hpp"

namespace dlab {

using Json = nlohmann::ordered_json;

inline Json json_of(const IneqCheck& c) {
    Json j;
    j["name"] = c.name;
    j["lhs"] = to_decimal(c.lhs);
    j["relation"] = c.relation;
    j["rhs"] = to_decimal(c.rhs);
    j["holds"] = c.holds;
    return j;
}

inline Json json_of(const ConstantLedger& led) {
    Json j;
    j["lambdas"] = tuple_literal(led.coeffs);
    j["k"] = led.coeffs.size();
    j["S"] = std::to_string(led.weight);
    j["P"] = to_decimal(led.product);
    j["Cprime"] = to_decimal(led.cprime);
    j["Cdoubleprime"] = to_decimal(led.cdoubleprime);
    j["Cfinal"] = to_decimal(led.cfinal);
    j["Cclosed"] = to_decimal(led.cclosed);
    Json derivation = Json::array();
    for (const LedgerEntry& e : led.derivation) {
        Json child;
        child["drop_index"] = std::to_string(e.index);
        child["g"] = std::to_string(e.g);
        child["sub"] = json_of(e.sub);
        derivation.push_back(std::move(child));
    }
    j["derivation"] = std::move(derivation);
    return j;
}

inline Json json_of(const WeightProfile& w) {
    Json j;
    j["S"] = std::to_string(w.total);
    Json s = Json::array();
    for (std::int64_t v : w.leave_one_out) s.push_back(std::to_string(v));
    j["leave_one_out"] = std::move(s);
    return j;
}

inline Json json_of(const MainReport& r) {
    Json j;
    j["check"] = "theorem_main";
    j["actual"] = std::to_string(r.actual);
    j["bound"] = to_decimal(r.bound);
    j["slack"] = to_decimal(r.slack);
    j["vacuous"] = r.vacuous;
    j["holds"] = r.holds;
    if (r.singleton_input) j["singleton_convention"] = true;
    j["constants"] = json_of(r.ledger);
    return j;
}

inline Json json_of(const GmrReport& r) {
    Json j;
    j["check"] = "superadditivity";
    j["k"] = std::to_string(r.k);
    j["actual"] = std::to_string(r.total_size);
    Json sizes = Json::array();
    for (std::uint64_t s : r.leave_one_out_sizes) sizes.push_back(std::to_string(s));
    j["leave_one_out_sizes"] = std::move(sizes);
    j["bound"] = to_decimal(r.bound);
    j["holds"] = r.holds;
    j["equality"] = r.equality;
    return j;
}

inline Json json_of(const DecompositionReport& r) {
    Json j;
    j["check"] = "residue_decomposition";
    j["lhs"] = std::to_string(r.lhs);
    j["summand_total"] = to_decimal(r.summand_total);
    Json summands = Json::array();
    for (const DecompositionSummand& s : r.summands) {
        Json e;
        Json idx = Json::array();
        for (std::size_t i : s.class_index) idx.push_back(std::to_string(i));
        e["classes"] = std::move(idx);
        e["size"] = std::to_string(s.size);
        summands.push_back(std::move(e));
    }
    j["summands"] = std::move(summands);
    j["identity"] = r.identity;
    j["disjoint"] = r.disjoint;
    j["holds"] = r.holds;
    return j;
}

inline Json json_of(const FdLemmaReport& r) {
    Json j;
    j["check"] = "fd_lemma";
    Json moduli = Json::array();
    for (std::int64_t g : r.moduli) moduli.push_back(std::to_string(g));
    j["moduli"] = std::move(moduli);
    Json fd = Json::array();
    for (bool b : r.fd_per_modulus) fd.push_back(b);
    j["fd_per_modulus"] = std::move(fd);
    j["actual"] = std::to_string(r.actual);
    j["stated_bound"] = to_decimal(r.stated_bound);
    j["sharp_bound"] = to_decimal(r.sharp_bound);
    j["slack"] = to_decimal(r.slack);
    j["holds"] = r.holds;
    j["holds_sharp"] = r.holds_sharp;
    j["constants"] = json_of(r.ledger);
    return j;
}

inline Json json_of(const DichotomyReport& r) {
    Json j;
    j["branch"] = branch_name(r.branch);
    j["coordinate"] = std::to_string(r.coordinate);
    j["object_index"] = std::to_string(r.object_index);
    j["modulus"] = std::to_string(r.modulus);
    j["object"] = r.object;
    if (r.gap) j["gap"] = json_of(*r.gap);
    j["Q"] = to_decimal(r.q);
    Json w = Json::array();
    for (std::size_t v : r.witnesses) w.push_back(std::to_string(v));
    j["witnesses"] = std::move(w);
    j["hypothesis_ok"] = r.hypothesis_ok;
    if (!r.hypothesis_detail.empty()) {
        Json hd = Json::array();
        for (bool b : r.hypothesis_detail) hd.push_back(b);
        j["hypothesis_detail"] = std::move(hd);
    }
    j["side_sizes_match"] = r.side_sizes_match;
    if (r.singleton_convention) j["singleton_convention"] = true;
    j["holds"] = r.holds;
    return j;
}

inline Json json_of(const CaseTrace& t) {
    Json j;
    j["check"] = "case_trace";
    j["u"] = std::to_string(t.u);
    Json steps = Json::array();
    for (const CaseStep& s : t.steps) {
        Json e;
        e["case"] = case_name(s.label);
        e["coordinate"] = std::to_string(s.coordinate);
        e["object_index"] = std::to_string(s.object_index);
        e["object"] = s.object;
        Json checks = Json::array();
        for (const IneqCheck& c : s.checks) checks.push_back(json_of(c));
        e["checks"] = std::move(checks);
        steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    Json assembly = Json::array();
    for (const IneqCheck& c : t.assembly) assembly.push_back(json_of(c));
    j["assembly"] = std::move(assembly);
    if (t.singleton_convention) j["singleton_convention"] = true;
    j["holds"] = t.all_hold;
    return j;
}

inline Json json_of(const IntervalReport& r) {
    Json j;
    j["check"] = "interval_upper_bound";
    j["n"] = std::to_string(r.n);
    j["size"] = std::to_string(r.size);
    j["bound"] = std::to_string(r.bound);
    j["interval"] = std::to_string(r.interval_lo) + ".." + std::to_string(r.interval_hi);
    j["contained"] = r.contained;
    j["size_ok"] = r.size_ok;
    j["holds"] = r.holds;
    return j;
}

inline Json json_of(const ResiduePartition& p) {
    Json j;
    j["modulus"] = std::to_string(p.modulus);
    j["class_count"] = std::to_string(p.class_count());
    Json classes = Json::array();
    for (const ResidueClass& c : p.classes) {
        Json e;
        e["offset"] = std::to_string(c.offset);
        e["members"] = set_literal(c.members);
        e["quotient"] = set_literal(c.quotient);
        classes.push_back(std::move(e));
    }
    j["classes"] = std::move(classes);
    return j;
}

inline Json json_of(const FinePartition& p) {
    Json j;
    j["p"] = std::to_string(p.p);
    Json coarse = Json::array();
    for (const ResiduePartition& rp : p.coarse) coarse.push_back(json_of(rp));
    j["coarse"] = std::move(coarse);
    Json cells = Json::array();
    for (const FineCell& c : p.cells) {
        Json e;
        e["offset"] = std::to_string(c.offset);
        e["members"] = set_literal(c.members);
        e["quotient"] = set_literal(c.quotient);
        Json idx = Json::array();
        for (std::size_t i : c.coarse_index) idx.push_back(std::to_string(i));
        e["coarse_index"] = std::move(idx);
        cells.push_back(std::move(e));
    }
    j["cell_count"] = std::to_string(p.cells.size());
    j["cells"] = std::move(cells);
    return j;
}

inline Json json_of(const SearchRecord& r) {
    Json j;
    j["lambda"] = tuple_literal(r.lambdas);
    j["n"] = r.n;
    j["window"] = r.window;
    j["min_size"] = r.min_size;
    j["empirical_constant"] = r.empirical_constant;
    j["exhaustive"] = r.exhaustive;
    j["witness_total"] = r.witness_total;
    j["witness_cap"] = r.witness_cap;
    Json ws = Json::array();
    for (const IntSet& w : r.witnesses) ws.push_back(set_literal(w));
    j["witnesses"] = std::move(ws);
    return j;
}

} // namespace dlab
