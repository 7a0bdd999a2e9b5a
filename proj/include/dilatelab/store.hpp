#pragma once

// Results store: one CSV per coefficient tuple plus a JSON sidecar with the
// full records. Files are rewritten whole, rows sorted by (n, window), with
// fixed formatting, so identical inputs always produce byte-identical files.
// The JSON sidecar is the authoritative cache read back by constant_table.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dilatelab/dilates.hpp"
#include "dilatelab/errors.hpp"
#include "dilatelab/search.hpp"

namespace dlab {

inline std::string lambda_file_stem(std::span<const std::int64_t> sorted_coeffs) {
    std::string stem = "l";
    for (std::int64_t c : sorted_coeffs) {
        stem += '_';
        stem += std::to_string(c);
    }
    return stem;
}

inline constexpr const char* kRecordCsvHeader =
    "lambda,k,n,window,min_size,empirical_constant,exhaustive,witness_count,example_witness";

inline std::string record_csv_row(const SearchRecord& rec) {
    return '"' + tuple_literal(rec.lambdas) + "\"," + std::to_string(rec.lambdas.size()) + ',' +
           std::to_string(rec.n) + ',' + std::to_string(rec.window) + ',' + std::to_string(rec.min_size) + ',' +
           std::to_string(rec.empirical_constant) + ',' + (rec.exhaustive ? "true" : "false") + ',' +
           std::to_string(rec.witness_total) + ",\"" +
           (rec.witnesses.empty() ? "" : set_literal(rec.witnesses.front())) + '"';
}

class ResultsStore {
public:
    explicit ResultsStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::filesystem::path csv_path(const DilateTuple& t) const {
        return dir_ / (lambda_file_stem(t.sorted_coeffs()) + ".csv");
    }
    std::filesystem::path json_path(const DilateTuple& t) const {
        return dir_ / (lambda_file_stem(t.sorted_coeffs()) + ".json");
    }

    // Cached records keyed by (n, window); empty when nothing is stored yet.
    std::map<std::pair<std::int64_t, std::int64_t>, SearchRecord> load(const DilateTuple& t) const {
        std::map<std::pair<std::int64_t, std::int64_t>, SearchRecord> out;
        const std::filesystem::path path = json_path(t);
        std::ifstream in(path);
        if (!in) return out;
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            fail(errc::io_error, "unreadable results file " + path.string() + ": " + e.what());
        }
        const std::string want = tuple_literal(t.sorted_coeffs());
        for (const auto& j : doc.value("records", nlohmann::json::array())) {
            SearchRecord rec;
            if (j.value("lambda", "") != want) continue;
            rec.lambdas = t.sorted_coeffs();
            rec.n = j.at("n").get<std::int64_t>();
            rec.window = j.at("window").get<std::int64_t>();
            rec.min_size = j.at("min_size").get<std::uint64_t>();
            rec.empirical_constant = j.at("empirical_constant").get<std::int64_t>();
            rec.exhaustive = j.at("exhaustive").get<bool>();
            rec.witness_total = j.at("witness_total").get<std::uint64_t>();
            rec.witness_cap = j.at("witness_cap").get<std::uint32_t>();
            for (const auto& w : j.at("witnesses")) rec.witnesses.push_back(parse_set_literal(w.get<std::string>()));
            out[{rec.n, rec.window}] = std::move(rec);
        }
        return out;
    }

    void save(const DilateTuple& t,
              const std::map<std::pair<std::int64_t, std::int64_t>, SearchRecord>& records) const {
        std::filesystem::create_directories(dir_);
        const std::string lambda = tuple_literal(t.sorted_coeffs());
        const std::size_t k = t.k();

        std::string csv = std::string(kRecordCsvHeader) + "\n";
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [key, rec] : records) {
            csv += record_csv_row(rec) + "\n";

            nlohmann::ordered_json j;
            j["lambda"] = lambda;
            j["k"] = k;
            j["n"] = rec.n;
            j["window"] = rec.window;
            j["min_size"] = rec.min_size;
            j["empirical_constant"] = rec.empirical_constant;
            j["exhaustive"] = rec.exhaustive;
            j["witness_total"] = rec.witness_total;
            j["witness_cap"] = rec.witness_cap;
            nlohmann::ordered_json ws = nlohmann::ordered_json::array();
            for (const IntSet& wset : rec.witnesses) ws.push_back(set_literal(wset));
            j["witnesses"] = std::move(ws);
            arr.push_back(std::move(j));
        }

        write_whole(csv_path(t), csv);
        nlohmann::ordered_json doc;
        doc["lambda"] = lambda;
        doc["k"] = k;
        doc["records"] = std::move(arr);
        write_whole(json_path(t), doc.dump(2) + "\n");
    }

private:
    static void write_whole(const std::filesystem::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io_error, "cannot write " + path.string());
        out << content;
        if (!out) fail(errc::io_error, "short write to " + path.string());
    }

    std::filesystem::path dir_;
};

struct TableResult {
    std::vector<SearchRecord> records; // one per n, ascending
    std::size_t computed = 0;
    std::size_t reused = 0;
};

// One record per n in [n_from, n_to], window = window_factor * n. Existing
// exhaustive records with the same key are reused from the store.
inline TableResult constant_table(const DilateTuple& lambdas, std::int64_t n_from, std::int64_t n_to,
                                  std::int64_t window_factor, const ResultsStore& store,
                                  const SearchOptions& opts = SearchOptions::from_env()) {
    if (n_from < 2 || n_from > n_to) fail(errc::window_too_small, "need 2 <= n_from <= n_to");
    if (window_factor < 1) fail(errc::window_too_small, "window factor must be >= 1");

    auto cached = store.load(lambdas);
    TableResult out;
    for (std::int64_t n = n_from; n <= n_to; ++n) {
        const std::int64_t w = detail::checked_i64(static_cast<__int128>(window_factor) * n, "window");
        const auto it = cached.find({n, w});
        if (it != cached.end() && it->second.exhaustive) {
            out.records.push_back(it->second);
            ++out.reused;
            continue;
        }
        SearchRecord rec = min_dilate_sum(lambdas, n, w, opts);
        cached[{n, w}] = rec;
        out.records.push_back(std::move(rec));
        ++out.computed;
    }
    store.save(lambdas, cached);
    return out;
}

} // namespace dlab
