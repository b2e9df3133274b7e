#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() { return PESYM_CLI_PATH; }

int run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_wall(std::string text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_ms") == std::string::npos) out << line << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("residual subcommand verifies the stratified builtin") {
    CHECK(run("residual --field stratified --points 300 --seed 1") == 0);
}

TEST_CASE("derotate subcommand transports the rotating column to rest") {
    CHECK(run("derotate --field inertial --f 1 --direction to-rest --verify --points 200") == 0);
}

TEST_CASE("megaideals subcommand reports the full chain") {
    const std::string rep = "/tmp/pesym_test_megaideals.json";
    CHECK(run("--report " + rep + " megaideals --degree 4") == 0);
    const std::string text = slurp(rep);
    CHECK(text.find("\"entries\"") != std::string::npos);
    size_t count = 0, pos = 0;
    while ((pos = text.find("\"label\"", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count == 11);
}

TEST_CASE("isomorphism subcommand and its negative control") {
    CHECK(run("isomorphism --f 1 --points 5 --seed 2") == 0);
    CHECK(run("isomorphism --f 1 --points 5 --seed 2 --corrupted") == 0);  // expects > 1e-2
}

TEST_CASE("group-verify fails on purpose under a perturbed coefficient") {
    CHECK(run("group-verify --points 150 --seed 3") == 0);
    CHECK(run("group-verify --points 150 --seed 3 --perturb T-scale --factor 1.01") == 1);
    // omega perturbation needs a field with active vertical velocity
    const std::string spec = "/tmp/pesym_test_expanding.json";
    write_file(spec, R"({"name":"reduced","spec":{
        "gamma1":{"type":"constant","value":1},"gamma2":{"type":"constant","value":0},
        "sigma1":{"type":"constant","value":0},"sigma2":{"type":"poly","coeffs":[0,1]},
        "v0x":{"type":"poly","coeffs":[0.5,0.2]},"v0y":{"type":"poly","coeffs":[0.1,-0.3]},
        "T0":{"type":"poly","coeffs":[1.0,0.1]},
        "t0":1.0,"p0":1.0,"t_range":[1.0,2.0]}})");
    CHECK(run("group-verify --field " + spec +
              " --points 100 --seed 4 --perturb omega-scale --factor 1.01") == 1);
    CHECK(run("group-verify --field " + spec + " --points 100 --seed 4") == 0);
}

TEST_CASE("symmetry-check sweeps the generator set") {
    CHECK(run("symmetry-check --field stratified --points 15 --seed 5 --eps 1e-2,1e-3") == 0);
}

TEST_CASE("reduce subcommand verifies the default family and emits samples") {
    const std::string csv = "/tmp/pesym_test_samples.csv";
    CHECK(run("reduce --verify --grid 10 --points 60 --emit-samples " + csv) == 0);
    const std::string text = slurp(csv);
    CHECK(text.rfind("t,x,y,p,u,v,omega,phi,T", 0) == 0);
}

TEST_CASE("exit codes distinguish config and domain errors") {
    CHECK(run("residual --field /nonexistent.json") == 2);
    const std::string bad = "/tmp/pesym_test_bad.json";
    write_file(bad, R"({"name":"stratified","unknown_key":1})");
    CHECK(run("residual --field " + bad) == 2);
    // p <= 0 in the box is a domain violation
    const std::string cfg = "/tmp/pesym_test_badbox.json";
    write_file(cfg, R"({"box":{"p":[-0.5,1.0]}})");
    CHECK(run("--config " + cfg + " residual --field stratified") == 3);
}

TEST_CASE("reports are byte-identical for identical seeds") {
    const std::string r1 = "/tmp/pesym_test_rep1.json", r2 = "/tmp/pesym_test_rep2.json";
    CHECK(run("--report " + r1 + " residual --field stratified --points 200 --seed 9") == 0);
    CHECK(run("--report " + r2 + " residual --field stratified --points 200 --seed 9") == 0);
    CHECK(strip_wall(slurp(r1)) == strip_wall(slurp(r2)));
    CHECK(slurp(r1).find("wall_ms") != std::string::npos);
    const std::string r3 = "/tmp/pesym_test_rep3.json";
    CHECK(run("--report " + r3 + " residual --field stratified --points 200 --seed 10") == 0);
    CHECK(strip_wall(slurp(r1)) != strip_wall(slurp(r3)));
}
