#pragma once
// Optional remote newform source (LMFDB-style JSON API), normalized into local records and cached.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <algorithm>
#include <future>
#include <string>
#include <vector>

#include "cache.hpp"
#include "errors.hpp"
#include "httplib.h"
#include "json.hpp"
#include "records.hpp"

namespace skl {

struct EndpointConfig {
    std::string base = "https://www.lmfdb.org";
    std::string path = "/api/mf_newforms/";
    int timeout_seconds = 30;
    int max_concurrency = 4;
};

struct FetchOptions {
    bool offline = false;
    std::filesystem::path cache_dir = ".skl-cache";
    EndpointConfig endpoint;
};

struct NewformQuery {
    std::string label;   // either a label
    long level = 0;      // or a (level, weight) pair
    long weight = 0;

    std::string canonical() const {
        if (!label.empty()) return "newform?label=" + label;
        return "newform?level=" + std::to_string(level) + "&weight=" + std::to_string(weight);
    }
    std::string api_params() const {
        std::string q = label.empty() ? "level=i" + std::to_string(level) + "&weight=i" + std::to_string(weight)
                                      : "label=" + label;
        return q + "&char_order=i1&_format=json&_fields=label,level,weight,dim,traces,atkin_lehner_eigenvals";
    }
};

namespace detail {

inline long json_long(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            long x = std::stol(v.get<std::string>(), &pos);
            if (pos == v.get<std::string>().size()) return x;
        } catch (const std::exception&) {
        }
    }
    throw DataError(where + ": expected an integer");
}

inline std::string json_integer_string(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) == 0) return z.get_str();
    }
    throw DataError(where + ": expected an integer coefficient");
}

}  // namespace detail

// upstream JSON -> local records; only rational (dimension-one) orbits carry exact coefficients
inline RecordSet normalize_upstream(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("upstream: malformed JSON at byte " + std::to_string(e.byte));
    }
    if (!j.is_object() || !j.contains("data") || !j["data"].is_array()) throw DataError("upstream: no data array");
    RecordSet s;
    for (std::size_t i = 0; i < j["data"].size(); ++i) {
        const auto& e = j["data"][i];
        std::string where = "upstream entry " + std::to_string(i);
        if (!e.is_object() || !e.contains("label") || !e["label"].is_string()) throw DataError(where + ": missing label");
        NewformRecord r;
        r.label = e["label"].get<std::string>();
        where += " (" + r.label + ")";
        for (const char* f : {"level", "weight", "dim", "traces"})
            if (!e.contains(f)) throw DataError(where + ": missing " + f);
        r.level = detail::json_long(e["level"], where + " level");
        r.weight = detail::json_long(e["weight"], where + " weight");
        if (detail::json_long(e["dim"], where + " dim") != 1)
            throw DataError(where + ": only rational newforms are supported from this source");
        if (!e["traces"].is_array() || e["traces"].empty()) throw DataError(where + ": traces must be a nonempty array");
        for (auto& t : e["traces"]) r.a.push_back(detail::json_integer_string(t, where + " traces"));
        if (e.contains("atkin_lehner_eigenvals") && e["atkin_lehner_eigenvals"].is_array())
            for (auto& pr : e["atkin_lehner_eigenvals"]) {
                if (!pr.is_array() || pr.size() != 2) throw DataError(where + ": malformed Atkin-Lehner entry");
                r.al_signs[detail::json_long(pr[0], where)] = static_cast<int>(detail::json_long(pr[1], where));
            }
        s.newforms.push_back(std::move(r));
    }
    std::sort(s.newforms.begin(), s.newforms.end(),
              [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
    validate(s);
    return s;
}

inline RecordSet fetch_remote(const NewformQuery& q, const FetchOptions& o) {
    RecordCache cache(o.cache_dir);
    auto key = q.canonical();
    if (auto hit = cache.get(key)) return *hit;
    if (o.offline) throw DataError("offline mode: no cached entry for " + key + " under " + o.cache_dir.string());
    httplib::Client cli(o.endpoint.base);
    cli.set_connection_timeout(o.endpoint.timeout_seconds);
    cli.set_read_timeout(o.endpoint.timeout_seconds);
    auto res = cli.Get(o.endpoint.path + "?" + q.api_params());
    if (!res) throw DataError("upstream unavailable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw DataError("upstream returned HTTP " + std::to_string(res->status));
    auto s = normalize_upstream(res->body);
    if (s.newforms.empty()) throw DataError("upstream: no newforms for " + key);
    cache.put(key, s);
    return s;
}

// at most max_concurrency requests in flight
inline std::vector<RecordSet> fetch_many(const std::vector<NewformQuery>& qs, const FetchOptions& o) {
    std::vector<RecordSet> out(qs.size());
    std::size_t lim = static_cast<std::size_t>(std::max(1, o.endpoint.max_concurrency));
    for (std::size_t start = 0; start < qs.size(); start += lim) {
        std::vector<std::future<RecordSet>> fs;
        for (std::size_t i = start; i < std::min(qs.size(), start + lim); ++i)
            fs.push_back(std::async(std::launch::async, [&, i] { return fetch_remote(qs[i], o); }));
        for (std::size_t i = 0; i < fs.size(); ++i) out[start + i] = fs[i].get();
    }
    return out;
}

}  // namespace skl
