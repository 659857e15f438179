// End-to-end runs of the command-line tool: exit codes, output formats and
// determinism.

#include "qfano/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace qfano;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch()
{
    static const fs::path dir = [] {
        fs::path d = fs::path(QFANO_TEST_TMP) / "cli";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

Run run(const std::string& args)
{
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = std::string("\"") + QFANO_CLI + "\" " + args + " 2>\"" + err.string() + "\"";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string path(const std::string& name) { return "\"" + (scratch() / name).string() + "\""; }

} // namespace

TEST_CASE("usage errors exit with 2")
{
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("search --q-min x").code == 2);
    CHECK(run("search --q-min 5 --q-max 2").code == 2);
    CHECK(run("--format yaml calibrate").code == 2);
    CHECK(run("link --case nope").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("hilbert")
{
    const Run ok = run("hilbert --q 7 --basket \"(2,3,13:6)\" --a3 1/78");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("h0        1 1 1 1 1 1 2 ") != std::string::npos);

    const Run js = run("--format json hilbert --q 7 --basket \"1/2(1,1,1);1/3(1,1,2);1/13(1,12,6)\" --a3 1/78");
    REQUIRE(js.code == 0);
    const Json j = Json::parse(js.out);
    CHECK(j["id"] == "q7:2-1,3-1,13-6:1/78");
    CHECK(j["h0"][6] == 2);
    CHECK(j["valid"] == true);
    CHECK(j["sigma"] == "1333/78");

    const Run bad = run("hilbert --q 7 --basket \"(2,3,13:4)\" --a3 1/78");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("valid     no") != std::string::npos);

    CHECK(run("hilbert --q 7 --basket \"(2,3,13)\" --a3 1/78").code == 2);
    CHECK(run("hilbert --q 7 --basket \"1/5(1,1,2)\" --a3 1/78").code == 2);
    CHECK(run("hilbert --q 7 --basket \"(2)\" --a3 1/0").code == 2);
    CHECK(run("hilbert --q 4 --basket \"(2)\" --a3 1/2").code == 2);  // index 2 not coprime to q
}

TEST_CASE("calibrate")
{
    const Run r = run("calibrate");
    CHECK(r.code == 0);
    std::size_t passes = 0;
    for (std::size_t at = r.out.find("PASS"); at != std::string::npos; at = r.out.find("PASS", at + 1))
        ++passes;
    CHECK(passes == 5);
    const Json j = Json::parse(run("--format json calibrate --top 40").out);
    CHECK(j["passed"] == true);
    CHECK(run("calibrate --top -1").code == 2);
}

TEST_CASE("search output is deterministic and round-trips")
{
    const Run a = run("--format json search --q-min 5 --q-max 7 --threads 1");
    const Run b = run("--format json search --q-min 5 --q-max 7 --threads 3");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Run c = run("search --q-min 5 --q-max 7 --out " + path("r57.json"));
    CHECK(c.code == 0);
    CHECK(slurp(scratch() / "r57.json") == a.out);
    const SearchReport r = report_from_json(Json::parse(a.out));
    CHECK(dump(report_to_json(r)) == a.out);
    CHECK(run("search --q-min 5 --q-max 7").out == run("search --q-min 5 --q-max 7").out);
}

TEST_CASE("check-props")
{
    REQUIRE(run("search --q-min 3 --q-max 19 --df 3 --out " + path("df3.json")).code == 0);
    const Run ok = run("check-props --in " + path("df3.json"));
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(run("check-props").code == 0);

    Json j = load_json_file((scratch() / "df3.json").string());
    j["candidates"][0]["h0"][2] = 99;
    write(scratch() / "tampered.json", dump(j));
    const Run bad = run("check-props --in " + path("tampered.json"));
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL post-hoc validity") != std::string::npos);

    write(scratch() / "broken.json", "{ not json");
    CHECK(run("check-props --in " + path("broken.json")).code == 2);
    CHECK(run("check-props --in " + path("absent.json")).code == 2);
}

TEST_CASE("link")
{
    const Run r = run("link --case 41478");
    CHECK(r.code == 0);
    CHECK(r.out.find("NON_BIRATIONAL{alpha=1/13") != std::string::npos);
    CHECK(r.out.find("replay ok") != std::string::npos);

    const Run q = run("--format json link --case qds");
    REQUIRE(q.code == 0);
    const Json j = Json::parse(q.out);
    CHECK(j["replay_ok"] == true);
    for (const auto& c : j["cases"])
        CHECK(c["resolved"] == "CONTRADICTION");

    write(scratch() / "scenario.json", R"j({"q": 4, "basket": "(3,3,5:2)", "a3": "2/15", "b": 3})j");
    const Run f = run("--format json link --case file --events --scenario " + path("scenario.json"));
    CHECK(f.code == 0);
    const Json fj = Json::parse(f.out);
    CHECK(fj["outcome"] == "CONTRADICTION");
    CHECK(fj["events"].size() == fj["event_count"]);
    CHECK(fj["replay"] == "ok");

    write(scratch() / "bad_rule.json", R"j({"q": 4, "basket": "(3,3,5:2)", "a3": "2/15", "b": 3, "disabled_rules": ["R99"]})j");
    CHECK(run("link --case file --scenario " + path("bad_rule.json")).code == 2);
    CHECK(run("link --case file").code == 2);
}

TEST_CASE("catalog import and diff")
{
    write(scratch() / "empty.csv", "");
    const Run e = run("catalog import " + path("empty.csv"));
    CHECK(e.code == 0);
    CHECK(e.out == "0 entries\n");

    write(scratch() / "zero.csv", "id,q,a3,basket\n1,7,1/78,(2)\n2,7,1/0,(2)\n");
    const Run z = run("catalog import " + path("zero.csv"));
    CHECK(z.code == 2);
    CHECK(z.err.find("line 3") != std::string::npos);

    write(scratch() / "row.csv", "id,q,a3,basket\n41478,7,1/78,\"1/2(1,1,1);1/3(1,1,2);1/13(1,3,10)\"\n");
    const Json rows = Json::parse(run("--format json catalog import " + path("row.csv")).out);
    CHECK(rows["count"] == 1);
    CHECK(rows["entries"][0]["a3"] == "1/78");

    REQUIRE(run("search --q-min 7 --q-max 7 --out " + path("r7.json")).code == 0);
    const SearchReport r7 = report_from_json(load_json_file((scratch() / "r7.json").string()));
    std::string all = "id,q,a3,basket\n";
    for (std::size_t i = 0; i < r7.candidates.size(); ++i) {
        const auto& c = r7.candidates[i].candidate;
        all += std::to_string(i) + ",7," + c.a3.to_fraction_string() + ",\"" + c.basket.triple_string() + "\"\n";
    }
    write(scratch() / "all7.csv", all);
    CHECK(run("catalog diff " + path("all7.csv") + " --report " + path("r7.json")).code == 0);
    CHECK(run("catalog diff " + path("all7.csv") + " --q-min 7 --q-max 7").code == 0);

    write(scratch() / "pin.csv", "id,q,a3,basket,pins\n" + all.substr(all.find('\n') + 1) + "41478,7,1/78,\"(2,3,13)\",6=1\n");
    const Run p = run("--format json catalog diff " + path("pin.csv") + " --report " + path("r7.json"));
    CHECK(p.code == 1);
    const Json pj = Json::parse(p.out);
    REQUIRE(pj["pin_mismatches"].size() == 1);
    CHECK(pj["pin_mismatches"][0]["entry"] == "41478");
    CHECK(pj["pin_mismatches"][0]["pinned"] == 1);
    CHECK(pj["pin_mismatches"][0]["computed"] == 2);
    CHECK(pj["theirs_only"].empty());
}
