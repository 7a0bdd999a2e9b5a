#pragma once

// Command-line front end. Subcommands: sum, verify (main/fd/decomposition/
// dist1/dist2), gmr, partition, trace, search, constants, interval.
// Output is JSON by default (--format text|csv otherwise), every big number a
// decimal string. Exit codes: 0 all checks passed, 1 a verified inequality
// failed (a counterexample — prints the instance), 2 usage or input error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilatelab/json_out.hpp"
#include "dilatelab/store.hpp"

namespace dlab {
namespace cli {

namespace detail {

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

inline std::string scalar_text(const Json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [key, val] : j.items())
            flatten(val, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& val : j)
            flatten(val, prefix + "[" + std::to_string(i++) + "]", out);
    } else {
        out.emplace_back(prefix, scalar_text(j));
    }
}

inline void emit(const Json& j, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << j.dump(2) << "\n";
        return;
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(j, "", flat);
    if (format == "text") {
        for (const auto& [key, val] : flat) out << key << " = " << val << "\n";
        return;
    }
    // csv: one header row, one value row
    std::string header, values;
    for (const auto& [key, val] : flat) {
        if (!header.empty()) {
            header += ',';
            values += ',';
        }
        header += csv_quote(key);
        values += csv_quote(val);
    }
    out << header << "\n" << values << "\n";
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact sums-of-dilates toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "json";
    bool seedless = false;
    std::string store_dir = "./results";
    std::uint64_t bit_budget = kDefaultBitBudget;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_flag("--seedless", seedless, "forbid randomness; all computations exhaustive (they are by construction)");
    app.add_option("--store", store_dir, "results store directory");
    app.add_option("--bit-budget", bit_budget, "bit window budget for the fast kernel");

    std::string lambdas_lit, set_lit;
    std::vector<std::string> set_lits;
    std::int64_t n = 0, n_from = 0, n_to = 0, u = 0, window = 0, window_factor = 3, modulus = 0;
    std::uint64_t idx_i = 0, idx_j = 0, idx_cell = 0;
    bool raw_subtuples = false;
    unsigned threads = 1;

    CLI::App* sum = app.add_subcommand("sum", "compute l1*A + ... + lk*A");
    sum->add_option("--lambdas", lambdas_lit)->required();
    sum->add_option("--set", set_lit)->required();

    CLI::App* constants = app.add_subcommand("constants", "exact constant ledger for a tuple");
    constants->add_option("--lambdas", lambdas_lit)->required();
    constants->add_flag("--raw-subtuples", raw_subtuples, "also print the raw sub-tuple reading of the recursion");

    CLI::App* verify = app.add_subcommand("verify", "check a bound or lemma on an instance");
    verify->require_subcommand(1);
    verify->fallthrough();
    CLI::App* vmain = verify->add_subcommand("main", "main lower bound");
    CLI::App* vfd = verify->add_subcommand("fd", "fully-distributed lemma");
    CLI::App* vdec = verify->add_subcommand("decomposition", "residue decomposition identity");
    CLI::App* vd1 = verify->add_subcommand("dist1", "class dichotomy");
    CLI::App* vd2 = verify->add_subcommand("dist2", "cell dichotomy");
    for (CLI::App* v : {vmain, vfd, vdec, vd1, vd2}) {
        v->add_option("--lambdas", lambdas_lit)->required();
        v->add_option("--set", set_lit)->required();
    }
    vd1->add_option("--i", idx_i, "coordinate index (0-based)")->required();
    vd1->add_option("--j", idx_j, "class index (0-based)")->required();
    vd2->add_option("--cell", idx_cell, "cell index (0-based)")->required();

    CLI::App* gmr = app.add_subcommand("gmr", "superadditivity bound for k sets");
    gmr->add_option("--set", set_lits, "operand set (repeat k times)")->required();

    CLI::App* partition = app.add_subcommand("partition", "residue partitions");
    partition->add_option("--set", set_lit)->required();
    partition->add_option("--lambdas", lambdas_lit, "cofactor partitions and the fine partition");
    partition->add_option("--modulus", modulus, "single partition mod q");

    CLI::App* trace = app.add_subcommand("trace", "replay one induction step u -> u+1");
    trace->add_option("--lambdas", lambdas_lit)->required();
    trace->add_option("--set", set_lit)->required();
    trace->add_option("--u", u)->required();

    CLI::App* search = app.add_subcommand("search", "exhaustive minimal dilate-sum search");
    search->add_option("--lambdas", lambdas_lit)->required();
    search->add_option("--n", n, "single set size");
    search->add_option("--window", window, "ground range {0..W-1} (default 3n)");
    search->add_option("--n-from", n_from, "table: first set size");
    search->add_option("--n-to", n_to, "table: last set size");
    search->add_option("--window-factor", window_factor, "table window rule W = factor*n");
    search->add_option("--threads", threads, "parallel work items (result is schedule-independent)");

    CLI::App* interval = app.add_subcommand("interval", "interval upper-bound check");
    interval->add_option("--lambdas", lambdas_lit)->required();
    interval->add_option("--n", n, "interval length");
    interval->add_option("--n-from", n_from, "sweep: first length");
    interval->add_option("--n-to", n_to, "sweep: last length");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("dilate_lab");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            out << app.help() << "\n";
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        Json doc;
        bool checks_ok = true;

        if (app.got_subcommand(sum)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            const IntSet a = parse_set_literal(set_lit);
            const IntSet s = dilate_sum_fast(t, a, bit_budget);
            doc["command"] = "sum";
            doc["lambdas"] = tuple_literal(t);
            doc["set"] = set_literal(a);
            doc["sum"] = set_literal(s);
            doc["size"] = std::to_string(s.size());
        } else if (app.got_subcommand(constants)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            doc["command"] = "constants";
            doc["lambdas"] = tuple_literal(t);
            doc["constants"] = json_of(recursive_constants(t));
            if (raw_subtuples)
                doc["constants_raw_subtuples"] = json_of(recursive_constants(t, SubTupleMode::raw));
        } else if (app.got_subcommand(verify)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            const IntSet a = parse_set_literal(set_lit);
            doc["command"] = "verify";
            doc["lambdas"] = tuple_literal(t);
            doc["set"] = set_literal(a);
            if (verify->got_subcommand(vmain)) {
                const MainReport r = verify_main(t, a);
                doc["verb"] = "main";
                doc["report"] = json_of(r);
                checks_ok = r.holds;
            } else if (verify->got_subcommand(vfd)) {
                const FdLemmaReport r = verify_fd_lemma(t, a);
                doc["verb"] = "fd";
                doc["report"] = json_of(r);
                checks_ok = r.holds;
            } else if (verify->got_subcommand(vdec)) {
                const DecompositionReport r = verify_decomposition(t, a);
                doc["verb"] = "decomposition";
                doc["report"] = json_of(r);
                checks_ok = r.holds;
            } else if (verify->got_subcommand(vd1)) {
                const DichotomyReport r = verify_dist1(t, a, idx_i, idx_j);
                doc["verb"] = "dist1";
                doc["report"] = json_of(r);
                checks_ok = r.holds;
            } else {
                const DichotomyReport r = verify_dist2(t, a, idx_cell);
                doc["verb"] = "dist2";
                doc["report"] = json_of(r);
                // a failed branch under a failed hypothesis contradicts nothing
                checks_ok = r.holds || !r.hypothesis_ok;
            }
        } else if (app.got_subcommand(gmr)) {
            std::vector<IntSet> sets;
            sets.reserve(set_lits.size());
            for (const std::string& lit : set_lits) sets.push_back(parse_set_literal(lit));
            const GmrReport r = verify_gmr(sets);
            doc["command"] = "gmr";
            Json in = Json::array();
            for (const IntSet& s : sets) in.push_back(set_literal(s));
            doc["sets"] = std::move(in);
            doc["report"] = json_of(r);
            checks_ok = r.holds;
        } else if (app.got_subcommand(partition)) {
            const IntSet a = parse_set_literal(set_lit);
            doc["command"] = "partition";
            doc["set"] = set_literal(a);
            if (partition->count("--modulus")) {
                doc["partition"] = json_of(residue_partition(a, modulus));
            } else if (partition->count("--lambdas")) {
                const DilateTuple t = parse_tuple_literal(lambdas_lit);
                doc["lambdas"] = tuple_literal(t);
                const CofactorGcds g = cofactor_gcds(t);
                Json gj = Json::array();
                for (std::int64_t v : g.g) gj.push_back(std::to_string(v));
                doc["cofactor_gcds"] = std::move(gj);
                Json coarse = Json::array();
                for (std::int64_t gi : g.g) coarse.push_back(json_of(residue_partition(a, gi)));
                doc["coarse"] = std::move(coarse);
                if (t.k() >= 2) doc["fine"] = json_of(fine_partition(t, a));
            } else {
                fail(errc::parse_error, "partition needs --modulus or --lambdas");
            }
        } else if (app.got_subcommand(trace)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            const IntSet a = parse_set_literal(set_lit);
            const CaseTrace tr = trace_cases(t, a, u);
            doc["command"] = "trace";
            doc["lambdas"] = tuple_literal(t);
            doc["set"] = set_literal(a);
            doc["report"] = json_of(tr);
            checks_ok = tr.all_hold;
        } else if (app.got_subcommand(search)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            SearchOptions opts = SearchOptions::from_env();
            opts.bit_budget = bit_budget;
            opts.threads = threads;
            doc["command"] = "search";
            doc["lambdas"] = tuple_literal(t);
            std::vector<SearchRecord> found;
            if (search->count("--n-from") || search->count("--n-to")) {
                if (!search->count("--n-from") || !search->count("--n-to"))
                    fail(errc::parse_error, "table mode needs both --n-from and --n-to");
                const ResultsStore store{store_dir};
                err << "search " << tuple_literal(t) << ": table n = " << n_from << ".." << n_to
                    << ", W = " << window_factor << "n -> " << store.csv_path(t).string() << "\n";
                TableResult table = constant_table(t, n_from, n_to, window_factor, store, opts);
                Json records = Json::array();
                for (const SearchRecord& r : table.records) records.push_back(json_of(r));
                doc["records"] = std::move(records);
                doc["computed"] = table.computed;
                doc["reused"] = table.reused;
                doc["store"] = store.csv_path(t).string();
                found = std::move(table.records);
            } else {
                if (!search->count("--n")) fail(errc::parse_error, "search needs --n or --n-from/--n-to");
                const std::int64_t w = search->count("--window") ? window : 3 * n;
                err << "search " << tuple_literal(t) << ": n = " << n << ", W = " << w << "\n";
                found.push_back(min_dilate_sum(t, n, w, opts));
                doc["record"] = json_of(found.front());
            }
            if (format == "csv") { // records are a real table; use the store's row format
                out << kRecordCsvHeader << "\n";
                for (const SearchRecord& r : found) out << record_csv_row(r) << "\n";
                return 0;
            }
        } else if (app.got_subcommand(interval)) {
            const DilateTuple t = parse_tuple_literal(lambdas_lit);
            doc["command"] = "interval";
            doc["lambdas"] = tuple_literal(t);
            const std::int64_t lo = interval->count("--n-from") ? n_from : n;
            const std::int64_t hi = interval->count("--n-to") ? n_to : lo;
            if (!interval->count("--n") && !interval->count("--n-from"))
                fail(errc::parse_error, "interval needs --n or --n-from/--n-to");
            Json reports = Json::array();
            for (std::int64_t len = lo; len <= hi; ++len) {
                const IntervalReport r = verify_interval(t, len);
                checks_ok = checks_ok && r.holds;
                reports.push_back(json_of(r));
            }
            if (reports.size() == 1) doc["report"] = reports.front();
            else doc["reports"] = std::move(reports);
        }

        if (seedless) doc["seedless"] = true;
        doc["ok"] = checks_ok;
        detail::emit(doc, format, out);
        return checks_ok ? 0 : 1;
    } catch (const error& e) {
        Json j;
        j["error"]["kind"] = errc_name(e.kind());
        j["error"]["message"] = e.what();
        detail::emit(j, format, err);
        return 2;
    }
}

} // namespace cli
} // namespace dlab
