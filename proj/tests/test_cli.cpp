#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsallis/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = tsallis::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

class TempDir {
public:
    TempDir() : path_(std::filesystem::temp_directory_path() / "tsallis_cli_test") {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = (path_ / name).string();
        std::ofstream(p) << content;
        return p;
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

bool single_line_error(const Result& r, const std::string& kind) {
    return r.err.rfind("tsallis: " + kind + ": ", 0) == 0 && count_lines(r.err) == 1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("entropy") {
    const auto r = run({"entropy", "--k", "2", "--q", "2", "--sigma", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.75\n");
    CHECK(r.err.empty());
}

TEST_CASE("estimate on a CSV sample") {
    TempDir dir;
    const auto data = dir.file("s.csv", "1,2,4\n");
    const auto r = run({"estimate", "--data", data, "--q", "0.5", "--method", "bz-smooth"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "method,k,n,q,t,w,base,multiplier,estimate\n"
          "bz-smooth,1,3,0.5,4,0.25,4,0.61544161783,1.23088323566\n");

    const auto bayes = run({"estimate", "--data", data, "--q", "0.5", "--method", "bayes", "--alpha", "1",
                            "--beta", "1"});
    CHECK(bayes.code == 0);
    CHECK(bayes.out.find("bayes,1,3,0.5,4,0.25,5,") != std::string::npos);

    const auto finite = run({"estimate", "--data", data, "--q", "0.5", "--method", "bz-finite", "--r", "1"});
    CHECK(finite.code == 0);
    CHECK(finite.out.find("bz-finite,1,3,0.5,4,0.25,4,") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and one prefixed line") {
    TempDir dir;
    const auto data = dir.file("s.csv", "1,2,4\n");

    const auto unknown = run({"entropy", "--q", "0.5", "--bogus", "1"});
    CHECK(unknown.code == 2);
    CHECK(single_line_error(unknown, "usage-error"));

    const auto no_sub = run({});
    CHECK(no_sub.code == 2);

    const auto window = run({"estimate", "--data", data, "--q", "2.5"});
    CHECK(window.code == 2);
    CHECK(single_line_error(window, "usage-error"));
    CHECK(window.err.find("q must satisfy 0<q<(n+1)/2") != std::string::npos);

    const auto window2 = run({"risk-table", "--n", "2", "--q", "1.6", "--M", "1000"});
    CHECK(window2.code == 2);
    CHECK(window2.err.find("q must satisfy 0<q<(n+1)/2") != std::string::npos);

    const auto ragged = run({"estimate", "--data", dir.file("r.csv", "1,2,3\n4,5\n"), "--q", "0.5"});
    CHECK(ragged.code == 2);
    CHECK(single_line_error(ragged, "usage-error"));

    const auto text = run({"estimate", "--data", dir.file("t.csv", "1,a,3\n"), "--q", "0.5"});
    CHECK(text.code == 2);

    const auto bayes = run({"estimate", "--data", data, "--q", "0.5", "--method", "bayes", "--alpha", "1"});
    CHECK(bayes.code == 2);
    CHECK(bayes.err.find("--alpha and --beta") != std::string::npos);

    const auto r_misuse = run({"estimate", "--data", data, "--q", "0.5", "--method", "stein", "--r", "1"});
    CHECK(r_misuse.code == 2);

    const auto no_r = run({"estimate", "--data", data, "--q", "0.5", "--method", "bz-finite"});
    CHECK(no_r.code == 2);

    const auto bad_method = run({"estimate", "--data", data, "--q", "0.5", "--method", "nope"});
    CHECK(bad_method.code == 2);

    const auto small_m = run({"pri-table", "--M", "10"});
    CHECK(small_m.code == 2);

    const auto bad_preset = run({"pri-table", "--preset", "fig1", "--M", "1000"});
    CHECK(bad_preset.code == 2);

    const auto bad_format = run({"pri-table", "--format", "xml", "--M", "1000"});
    CHECK(bad_format.code == 2);

    const auto bad_u = run({"ci-coverage", "--k", "2", "--n", "4", "--q", "0.5", "--u", "0.1", "--M", "1000"});
    CHECK(bad_u.code == 2);

    const auto nan_q = run({"entropy", "--q", "abc"});
    CHECK(nan_q.code == 2);
}

TEST_CASE("runtime errors exit with 1") {
    TempDir dir;
    const auto missing = run({"estimate", "--data", dir.path("nope.csv"), "--q", "0.5"});
    CHECK(missing.code == 1);
    CHECK(single_line_error(missing, "runtime-error"));

    const auto constant = run({"estimate", "--data", dir.file("c.csv", "2,2,2\n"), "--q", "0.5"});
    CHECK(constant.code == 1);

    const auto unwritable = run({"entropy", "--q", "0.5", "--out", dir.path("no/such/dir/x.txt")});
    CHECK(unwritable.code == 1);
    CHECK(single_line_error(unwritable, "runtime-error"));
}

TEST_CASE("confidence interval and coverage") {
    TempDir dir;
    const auto data = dir.file("s.csv", "1.5,2.5\n");
    const auto ci = run({"ci", "--data", data, "--q", "0.5"});
    CHECK(ci.code == 0);
    CHECK(ci.out == "level,lower,upper\n0.95,0.520658266699,6.28473469649\n");

    const auto cov = run({"ci-coverage", "--n", "4", "--q", "0.5", "--M", "2000", "--seed", "1"});
    CHECK(cov.code == 0);
    CHECK(cov.out.rfind("k,n,q,level,M,seed,coverage\n1,4,0.5,0.95,2000,1,", 0) == 0);
}

TEST_CASE("risk-table") {
    const auto r = run({"risk-table", "--n", "3", "--q", "0.5", "--M", "2000", "--seed", "4", "--alpha", "1",
                        "--beta", "2", "--r", "0.5"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 7);
    CHECK(r.out.find("\nbaee,") != std::string::npos);
    CHECK(r.out.find("\nbz-finite,") != std::string::npos);
    CHECK(r.out.find("\nbayes,") != std::string::npos);

    const auto one = run({"risk-table", "--n", "3", "--q", "0.5", "--M", "2000", "--method", "stein"});
    CHECK(one.code == 0);
    CHECK(count_lines(one.out) == 3);
}

TEST_CASE("pri-table is byte-identical across runs and threads") {
    const auto a = run({"pri-table", "--preset", "table1", "--seed", "42", "--M", "1000", "--threads", "1"});
    const auto b = run({"pri-table", "--preset", "table1", "--seed", "42", "--M", "1000", "--threads", "3"});
    const auto c = run({"pri-table", "--preset", "table1", "--seed", "42", "--M", "1000"});
    CHECK(a.code == 0);
    CHECK(count_lines(a.out) == 109);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const auto d = run({"pri-table", "--preset", "table1", "--seed", "43", "--M", "1000"});
    CHECK(d.out != a.out);

    const auto json = run({"pri-table", "--preset", "table1", "--seed", "42", "--M", "1000", "--format", "json"});
    CHECK(json.code == 0);
    CHECK(json.out.find("\"schema\": \"tsallis-pri-table/1\"") != std::string::npos);
}

TEST_CASE("--out writes the result to a file") {
    TempDir dir;
    const auto path = dir.path("e.txt");
    const auto r = run({"entropy", "--k", "2", "--q", "2", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "0.75\n");
}

TEST_CASE("oracle-check") {
    const auto r = run({"oracle-check"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("quantity,k,n,q,param,closed_form,oracle,abs_gap,rel_gap,tolerance,pass\n", 0) == 0);
    CHECK(r.out.find(",fail\n") == std::string::npos);
}

TEST_CASE("plot-data presets") {
    const auto f3 = run({"plot-data", "--preset", "fig3", "--seed", "1"});
    CHECK(f3.code == 0);
    CHECK(count_lines(f3.out) == 51);
    CHECK(f3.out.rfind("sample,loss_baee,loss_stein,loss_bz,baee_risk\n1,", 0) == 0);
    const auto f5 = run({"plot-data", "--preset", "fig5", "--M", "1000"});
    CHECK(f5.code == 0);
    CHECK(count_lines(f5.out) == 50);
    CHECK(run({"plot-data", "--preset", "fig9"}).code == 2);
    CHECK(run({"plot-data"}).code == 2);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pri-table") != std::string::npos);
}

}  // TEST_SUITE
