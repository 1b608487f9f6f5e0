#pragma once
// On-disk record collections: newforms and plus-space forms, numbers carried as strings.

#include <gmpxx.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "gl2.hpp"
#include "json.hpp"
#include "kohnen.hpp"
#include "real.hpp"

namespace skl {

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr int kMinDeclaredDigits = 30;

// a(n) entries: "p/q" or integer strings when precision == 0, decimal strings otherwise
struct NewformRecord {
    std::string label;
    long level = 1;
    long weight = 2;
    int precision = 0;
    std::vector<std::string> a;  // a[0] is a(1)
    std::map<long, int> al_signs;

    bool exact() const { return precision == 0; }
};

struct HalfIntRecord {
    std::string label;
    long level = 4;
    long weight_num = 3;  // 2k + 1
    int precision = 0;
    std::map<long, std::string> c;
    long max_d = 0;

    long k() const { return (weight_num - 1) / 2; }
    bool exact() const { return precision == 0; }
};

struct RecordSet {
    int version = kRecordSchemaVersion;
    std::vector<NewformRecord> newforms;
    std::vector<HalfIntRecord> halfint;
};

namespace detail {

inline bool looks_decimal(const std::string& s) { return s.find_first_of(".eE") != std::string::npos; }

inline mpq_class parse_rational(const std::string& s, const std::string& where) {
    if (s.empty() || looks_decimal(s)) throw DataError(where + ": expected an exact rational, got \"" + s + "\"");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw DataError(where + ": malformed rational \"" + s + "\"");
    if (q.get_den() == 0) throw DataError(where + ": zero denominator");
    q.canonicalize();
    return q;
}

inline Real parse_decimal(const std::string& s, const std::string& where) {
    Real r;
    if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0)
        throw DataError(where + ": malformed decimal \"" + s + "\"");
    return r;
}

inline Real parse_number(const std::string& s, int precision, const std::string& where) {
    return precision == 0 ? to_real(parse_rational(s, where)) : parse_decimal(s, where);
}

inline std::string rec_where(const char* kind, std::size_t i, const std::string& label, const char* field) {
    return std::string(kind) + " record " + std::to_string(i) + " (" + label + ") field " + field;
}

}  // namespace detail

inline void validate(const NewformRecord& r, std::size_t i = 0) {
    using detail::rec_where;
    if (r.level < 1) throw DataError(rec_where("newform", i, r.label, "level") + ": must be >= 1");
    if (r.weight < 2) throw DataError(rec_where("newform", i, r.label, "weight") + ": must be >= 2");
    if (r.precision < 0 || (r.precision > 0 && r.precision < kMinDeclaredDigits))
        throw DataError(rec_where("newform", i, r.label, "precision") + ": decimal entries need at least " +
                        std::to_string(kMinDeclaredDigits) + " digits");
    if (r.a.empty()) throw DataError(rec_where("newform", i, r.label, "a") + ": empty");
    auto where = rec_where("newform", i, r.label, "a");
    for (std::size_t n = 0; n < r.a.size(); ++n) detail::parse_number(r.a[n], r.precision, where + "[" + std::to_string(n + 1) + "]");
    bool one = r.exact() ? detail::parse_rational(r.a[0], where) == 1 : detail::parse_decimal(r.a[0], where) == 1;
    if (!one) throw DataError(where + ": a(1) must be 1, got " + r.a[0]);
    auto ps = prime_divisors(r.level);
    std::vector<long> keys;
    for (auto& [p, s] : r.al_signs) {
        keys.push_back(p);
        if (s != 1 && s != -1) throw DataError(rec_where("newform", i, r.label, "al_signs") + ": signs must be +1 or -1");
    }
    if (keys != ps) {
        std::string need;
        for (long p : ps) need += " " + std::to_string(p);
        throw DataError(rec_where("newform", i, r.label, "al_signs") + ": keys must be exactly the primes dividing the level:" +
                        (need.empty() ? " (none)" : need));
    }
}

inline void validate(const HalfIntRecord& r, std::size_t i = 0) {
    using detail::rec_where;
    if (r.level < 4 || r.level % 4 != 0) throw DataError(rec_where("halfint", i, r.label, "level") + ": must be 4N");
    if (r.weight_num < 3 || r.weight_num % 2 == 0)
        throw DataError(rec_where("halfint", i, r.label, "weight_num") + ": must be 2k + 1 with k >= 1");
    if (r.precision < 0 || (r.precision > 0 && r.precision < kMinDeclaredDigits))
        throw DataError(rec_where("halfint", i, r.label, "precision") + ": decimal entries need at least " +
                        std::to_string(kMinDeclaredDigits) + " digits");
    for (auto& [D, v] : r.c) {
        auto where = rec_where("halfint", i, r.label, "c") + "[" + std::to_string(D) + "]";
        if (D < 0 || D > r.max_d) throw DataError(where + ": index outside [0, max_d]");
        if (!plus_support(D, r.k())) throw DataError(where + ": index outside the plus-space support");
        detail::parse_number(v, r.precision, where);
    }
}

inline void validate(const RecordSet& s) {
    if (s.version != kRecordSchemaVersion)
        throw DataError("record set: unsupported version " + std::to_string(s.version));
    for (std::size_t i = 0; i < s.newforms.size(); ++i) validate(s.newforms[i], i);
    for (std::size_t i = 0; i < s.halfint.size(); ++i) validate(s.halfint[i], i);
}

inline nlohmann::json to_json(const NewformRecord& r) {
    nlohmann::json al = nlohmann::json::array();
    for (auto& [p, s] : r.al_signs) al.push_back({p, s});
    return {{"label", r.label}, {"level", r.level}, {"weight", r.weight}, {"precision", r.precision},
            {"a", r.a},         {"al_signs", al}};
}

inline nlohmann::json to_json(const HalfIntRecord& r) {
    nlohmann::json c = nlohmann::json::array();
    for (auto& [D, v] : r.c) c.push_back({D, v});
    return {{"label", r.label}, {"level", r.level}, {"weight_num", r.weight_num}, {"precision", r.precision},
            {"c", c},           {"max_d", r.max_d}};
}

inline nlohmann::json to_json(const RecordSet& s) {
    nlohmann::json nf = nlohmann::json::array(), hi = nlohmann::json::array();
    for (auto& r : s.newforms) nf.push_back(to_json(r));
    for (auto& r : s.halfint) hi.push_back(to_json(r));
    return {{"version", s.version}, {"newforms", nf}, {"halfint", hi}};
}

namespace detail {

template <class V>
V field(const nlohmann::json& j, const char* name, const std::string& where) {
    if (!j.is_object() || !j.contains(name)) throw DataError(where + ": missing field " + name);
    try {
        return j.at(name).get<V>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(where + ": field " + name + " has the wrong type");
    }
}

}  // namespace detail

inline NewformRecord newform_from_json(const nlohmann::json& j, std::size_t i = 0) {
    std::string where = "newform record " + std::to_string(i);
    NewformRecord r;
    r.label = detail::field<std::string>(j, "label", where);
    where += " (" + r.label + ")";
    r.level = detail::field<long>(j, "level", where);
    r.weight = detail::field<long>(j, "weight", where);
    r.precision = detail::field<int>(j, "precision", where);
    r.a = detail::field<std::vector<std::string>>(j, "a", where);
    for (auto& e : detail::field<std::vector<std::vector<long>>>(j, "al_signs", where)) {
        if (e.size() != 2) throw DataError(where + ": al_signs entries are [p, sign] pairs");
        r.al_signs[e[0]] = static_cast<int>(e[1]);
    }
    return r;
}

inline HalfIntRecord halfint_from_json(const nlohmann::json& j, std::size_t i = 0) {
    std::string where = "halfint record " + std::to_string(i);
    HalfIntRecord r;
    r.label = detail::field<std::string>(j, "label", where);
    where += " (" + r.label + ")";
    r.level = detail::field<long>(j, "level", where);
    r.weight_num = detail::field<long>(j, "weight_num", where);
    r.precision = detail::field<int>(j, "precision", where);
    r.max_d = detail::field<long>(j, "max_d", where);
    auto c = detail::field<nlohmann::json>(j, "c", where);
    if (!c.is_array()) throw DataError(where + ": field c must be an array");
    for (auto& e : c) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_string())
            throw DataError(where + ": c entries are [D, \"value\"] pairs");
        r.c[e[0].get<long>()] = e[1].get<std::string>();
    }
    return r;
}

inline RecordSet records_from_json(const nlohmann::json& j) {
    RecordSet s;
    s.version = detail::field<int>(j, "version", "record set");
    if (j.contains("newforms"))
        for (std::size_t i = 0; i < j["newforms"].size(); ++i) s.newforms.push_back(newform_from_json(j["newforms"][i], i));
    if (j.contains("halfint"))
        for (std::size_t i = 0; i < j["halfint"].size(); ++i) s.halfint.push_back(halfint_from_json(j["halfint"][i], i));
    validate(s);
    return s;
}

// canonical text: sorted keys, two-space indent, trailing newline
inline std::string dump_records(const RecordSet& s) { return to_json(s).dump(2) + "\n"; }

inline RecordSet parse_records(const std::string& text, const std::string& origin = "<string>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(origin + ": malformed document at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return records_from_json(j);
}

inline RecordSet load_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_records(os.str(), path.string());
}

// write-temp-rename
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    static std::atomic<unsigned long> counter{0};
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(static_cast<unsigned long>(::getpid())) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << bytes;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot rename into " + path.string());
    }
}

inline void save_records(const RecordSet& s, const std::filesystem::path& path) {
    validate(s);
    atomic_write(path, dump_records(s));
}

// conversions to and from the in-memory types

inline NewformGL2 to_newform(const NewformRecord& r) {
    validate(r);
    long nmax = static_cast<long>(r.a.size());
    std::vector<Real> a(nmax + 1, Real(0));
    std::vector<mpz_class> ae;
    std::string where = "newform " + r.label + " a";
    bool integral = r.exact();
    std::vector<mpq_class> q;
    if (r.exact()) {
        for (long n = 1; n <= nmax; ++n) {
            q.push_back(detail::parse_rational(r.a[n - 1], where));
            integral = integral && q.back().get_den() == 1;
        }
    }
    if (integral) ae.assign(nmax + 1, 0);
    for (long n = 1; n <= nmax; ++n) {
        if (r.exact()) {
            a[n] = to_real(q[n - 1]);
            if (integral) ae[n] = q[n - 1].get_num();
        } else {
            a[n] = detail::parse_decimal(r.a[n - 1], where);
        }
    }
    return NewformGL2(r.label, r.level, r.weight, std::move(a), std::move(ae), r.al_signs);
}

inline NewformRecord to_record(const NewformGL2& f, long nmax, int digits) {
    NewformRecord r;
    r.label = f.label();
    r.level = f.level();
    r.weight = f.weight();
    r.al_signs = f.atkin_lehner();
    r.precision = f.exact() ? 0 : digits;
    for (long n = 1; n <= nmax; ++n) r.a.push_back(f.exact() ? f.a_exact(n).get_str() : decimal(f.a(n), digits));
    return r;
}

inline HalfIntForm<Real> to_halfint(const HalfIntRecord& r) {
    validate(r);
    std::vector<Real> c(r.max_d + 1, Real(0));
    for (auto& [D, v] : r.c) c[D] = detail::parse_number(v, r.precision, "halfint " + r.label);
    return HalfIntForm<Real>(r.level, r.k(), std::move(c));
}

inline std::optional<HalfIntForm<mpq_class>> to_halfint_exact(const HalfIntRecord& r) {
    if (!r.exact()) return std::nullopt;
    validate(r);
    std::vector<mpq_class> c(r.max_d + 1, 0);
    for (auto& [D, v] : r.c) c[D] = detail::parse_rational(v, "halfint " + r.label);
    return HalfIntForm<mpq_class>(r.level, r.k(), std::move(c));
}

template <class T>
HalfIntRecord to_record(const HalfIntForm<T>& h, const std::string& label, int digits) {
    HalfIntRecord r;
    r.label = label;
    r.level = h.level();
    r.weight_num = 2 * h.k() + 1;
    r.max_d = h.dmax() - 1;
    r.precision = scalar_traits<T>::exact ? 0 : digits;
    for (long D = 0; D < h.dmax(); ++D) {
        if (scalar_traits<T>::is_zero(h.c(D))) continue;
        if constexpr (scalar_traits<T>::exact) {
            mpq_class q(h.c(D));
            r.c[D] = q.get_str();
        } else {
            r.c[D] = decimal(h.c(D), digits);
        }
    }
    return r;
}

}  // namespace skl
