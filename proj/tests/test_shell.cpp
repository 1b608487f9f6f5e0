#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "skl/cli.hpp"

using namespace skl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("skl_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const NewformGL2& weight22() {
    static NewformGL2 f = [] {
        DigitsGuard dg(40);
        return eigenbasis_level1(22, 40).forms.at(0);
    }();
    return f;
}

RecordSet sample_set() {
    RecordSet s;
    s.newforms.push_back(to_record(weight22(), 20, 40));
    NewformRecord r;
    r.label = "15.2.a.a";
    r.level = 15;
    r.weight = 2;
    r.a = {"1", "-1", "-1", "-1", "1"};
    r.al_signs = {{3, 1}, {5, -1}};
    s.newforms.push_back(r);
    s.halfint.push_back(to_record(plus_basis_level4(11, 40)[0].normalized(), "22.1.a/plus", 40));
    return s;
}

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "skl");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string upstream_body(const std::vector<std::string>& traces, long dim = 1) {
    nlohmann::json e = {{"label", "22.1.a.a"}, {"level", 1}, {"weight", 22}, {"dim", dim}, {"atkin_lehner_eigenvals", nlohmann::json::array()}};
    nlohmann::json t = nlohmann::json::array();
    for (auto& x : traces) t.push_back(std::stoll(x));
    e["traces"] = t;
    return nlohmann::json{{"data", {e}}}.dump();
}

// a local stand-in for the remote source
class MockServer {
public:
    explicit MockServer(std::string body, int status = 200) : body_(std::move(body)), status_(status) {
        svr_.Get(".*", [this](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = status_;
            res.set_content(body_, "application/json");
        });
        port_ = svr_.bind_to_any_port("127.0.0.1");
        th_ = std::thread([this] { svr_.listen_after_bind(); });
        svr_.wait_until_ready();
    }
    ~MockServer() {
        svr_.stop();
        th_.join();
    }
    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::atomic<int> hits{0};

private:
    httplib::Server svr_;
    std::string body_;
    int status_;
    int port_ = 0;
    std::thread th_;
};

std::vector<std::string> computed_traces(long n) {
    std::vector<std::string> t;
    for (long i = 1; i <= n; ++i) t.push_back(weight22().a_exact(i).get_str());
    return t;
}

}  // namespace

TEST(Records, RoundTripIsByteIdentical) {
    auto s = sample_set();
    auto text = dump_records(s);
    auto back = parse_records(text);
    EXPECT_EQ(dump_records(back), text);
    auto f = to_newform(back.newforms[0]);
    for (long n = 1; n <= 20; ++n) EXPECT_EQ(f.a_exact(n), weight22().a_exact(n));
    auto h = to_halfint_exact(back.halfint[0]);
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(h->c(3), 1);
    EXPECT_EQ(h->c(4), 10);
}

TEST(Records, DecimalRecordsCarryPrecision) {
    DigitsGuard dg(50);
    auto f = eigenbasis_level1(24, 20).forms[0];
    auto r = to_record(f, 10, 45);
    EXPECT_EQ(r.precision, 45);
    auto g = to_newform(r);
    EXPECT_LT(abs(g.a(2) - f.a(2)) / abs(f.a(2)), eps_digits(40));
    r.precision = 20;
    EXPECT_THROW(validate(r), DataError);
}

TEST(Records, RejectsBadLeadingCoefficient) {
    auto s = sample_set();
    s.newforms[1].a[0] = "2";
    try {
        validate(s);
        FAIL() << "accepted a(1) = 2";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("15.2.a.a"), std::string::npos) << e.what();
    }
}

TEST(Records, RejectsMissingSign) {
    auto s = sample_set();
    s.newforms[1].al_signs.erase(5);
    EXPECT_THROW(validate(s), DataError);
    s.newforms[1].al_signs[5] = -1;
    s.newforms[1].al_signs[7] = 1;
    EXPECT_THROW(validate(s), DataError);
}

TEST(Records, RejectsOffPlusSupport) {
    auto s = sample_set();
    s.halfint[0].c[5] = "1";  // 5 = 1 mod 4 is outside the plus space for odd k
    EXPECT_THROW(validate(s), DataError);
}

TEST(Records, MalformedJsonReportsPosition) {
    try {
        parse_records("{\"version\": 1, \"newforms\": [}", "bad.json");
        FAIL();
    } catch (const DataError& e) {
        std::string m = e.what();
        EXPECT_NE(m.find("bad.json"), std::string::npos);
        EXPECT_NE(m.find("byte 29"), std::string::npos) << m;
    }
}

TEST(Records, AtomicSaveLeavesNoTemporaries) {
    auto d = scratch_dir("atomic");
    auto p = d / "sub" / "r.json";
    save_records(sample_set(), p);
    save_records(sample_set(), p);
    std::size_t files = 0;
    for (auto& e : fs::recursive_directory_iterator(d))
        if (e.is_regular_file()) ++files;
    EXPECT_EQ(files, 1u);
    EXPECT_EQ(dump_records(load_records(p)), dump_records(sample_set()));
    auto bad = sample_set();
    bad.newforms[0].a[0] = "3";
    EXPECT_THROW(save_records(bad, d / "bad.json"), DataError);
    EXPECT_FALSE(fs::exists(d / "bad.json"));
    fs::remove_all(d);
}

TEST(Cache, KeysAreStableHashes) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    RecordCache c("/tmp/x");
    EXPECT_EQ(c.path_for("q").parent_path().filename().string().size(), 2u);
    EXPECT_EQ(c.path_for("q"), c.path_for("q"));
    EXPECT_NE(c.path_for("q"), c.path_for("r"));
}

TEST(Remote, NormalizesAndCachesMockUpstream) {
    auto d = scratch_dir("remote");
    MockServer srv(upstream_body(computed_traces(20)));
    FetchOptions o;
    o.cache_dir = d;
    o.endpoint.base = srv.base();
    NewformQuery q;
    q.label = "22.1.a.a";
    auto s = fetch_remote(q, o);
    ASSERT_EQ(s.newforms.size(), 1u);
    auto f = to_newform(s.newforms[0]);
    EXPECT_EQ(f.weight(), 22);
    for (long n = 1; n <= 20; ++n) EXPECT_EQ(f.a_exact(n), weight22().a_exact(n)) << n;
    EXPECT_EQ(srv.hits.load(), 1);
    // second call is served from the cache, also offline
    o.offline = true;
    auto again = fetch_remote(q, o);
    EXPECT_EQ(dump_records(again), dump_records(s));
    EXPECT_EQ(srv.hits.load(), 1);
    fs::remove_all(d);
}

TEST(Remote, OfflineMissIsDataError) {
    auto d = scratch_dir("offline");
    FetchOptions o;
    o.cache_dir = d;
    o.offline = true;
    o.endpoint.base = "http://127.0.0.1:9";
    NewformQuery q;
    q.level = 15;
    q.weight = 2;
    EXPECT_THROW(fetch_remote(q, o), DataError);
    fs::remove_all(d);
}

TEST(Remote, UpstreamFailuresAreDataErrors) {
    auto d = scratch_dir("fail");
    FetchOptions o;
    o.cache_dir = d;
    NewformQuery q;
    q.label = "22.1.a.a";
    {
        MockServer srv("oops", 500);
        o.endpoint.base = srv.base();
        EXPECT_THROW(fetch_remote(q, o), DataError);
    }
    {
        MockServer srv(upstream_body(computed_traces(5), 2));
        o.endpoint.base = srv.base();
        EXPECT_THROW(fetch_remote(q, o), DataError);
    }
    {
        auto t = computed_traces(5);
        t[0] = "2";
        MockServer srv(upstream_body(t));
        o.endpoint.base = srv.base();
        EXPECT_THROW(fetch_remote(q, o), DataError);
    }
    // nothing invalid reached the cache
    EXPECT_TRUE(fs::is_empty(d));
    fs::remove_all(d);
}

TEST(Remote, FetchManyKeepsOrder) {
    auto d = scratch_dir("many");
    MockServer srv(upstream_body(computed_traces(10)));
    FetchOptions o;
    o.cache_dir = d;
    o.endpoint.base = srv.base();
    o.endpoint.max_concurrency = 2;
    std::vector<NewformQuery> qs(3);
    qs[0].label = "a";
    qs[1].label = "b";
    qs[2].label = "c";
    auto rs = fetch_many(qs, o);
    ASSERT_EQ(rs.size(), 3u);
    for (auto& r : rs) EXPECT_EQ(r.newforms.at(0).label, "22.1.a.a");
    fs::remove_all(d);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"coset", "--n", "3", "--m", "1", "--verify"}).code, 0);
    auto bad = run_cli({"nonvanish", "--two-k", "22", "--digts", "30"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("--digits"), std::string::npos) << bad.err;
    EXPECT_EQ(run_cli({"nonvanish", "--two-k", "20"}).code, 2);
    EXPECT_EQ(run_cli({"coset"}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    // level 3 needs data: a computation failure, not a usage error
    EXPECT_EQ(run_cli({"nonvanish", "--two-k", "22", "--level", "3"}).code, 1);
    EXPECT_EQ(run_cli({"lift", "--two-k", "22", "--data", "/nonexistent.json"}).code, 1);
}

TEST(Cli, JsonIsDeterministic) {
    auto a = run_cli({"lift", "--two-k", "22", "--max", "2", "--digits", "30"});
    auto b = run_cli({"lift", "--two-k", "22", "--max", "2", "--digits", "30"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["command"], "lift");
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_EQ(j["version"], kOutputSchemaVersion);
    EXPECT_FALSE(a.err.empty());
}

TEST(Cli, TextOutput) {
    auto r = run_cli({"avg", "--prime-max", "13", "--emit", "text"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("command"), std::string::npos);
    EXPECT_THROW(nlohmann::json::parse(r.out), nlohmann::json::parse_error);
}

TEST(Cli, ReadsFixture) {
    auto p = fs::path(SKL_DATA_DIR) / "weight22_level1.json";
    ASSERT_TRUE(fs::exists(p));
    auto s = load_records(p);
    EXPECT_NO_THROW(validate(s));
    auto r = run_cli({"lift", "--two-k", "22", "--max", "1", "--data", p.string(), "--digits", "30"});
    EXPECT_EQ(r.code, 0) << r.err;
}
