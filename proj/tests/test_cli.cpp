// End-to-end checks of the command-line binary. The binary path arrives as
// the last plain argument (wired up by the build).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

std::string g_binary;

struct RunOutput {
    int exit_code = -1;
    std::string stdout_text;
};

RunOutput run(const std::string& args) {
    const std::string out_file = "cli_test_stdout.tmp";
    const std::string cmd = "'" + g_binary + "' " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunOutput r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.stdout_text = buf.str();
    std::remove(out_file.c_str());
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("spectrum emits constant +-1 levels without coupling") {
    write_file("cli_spec.cfg", "coupling = ising_z\ng = 0\ntheta = 1.0\nomega = 1.0\n");
    const auto r = run("spectrum --config cli_spec.cfg --out cli_spec.csv --n-steps 64 --quiet");
    REQUIRE(r.exit_code == 0);
    std::ifstream in("cli_spec.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,E1,E2,E3,E4,gap12,gap34");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        double t, e1, e2, e3, e4, g12, g34;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &t, &e1, &e2, &e3,
                            &e4, &g12, &g34) == 7);
        CHECK(std::abs(e1 - 1.0) < 1e-12);
        CHECK(std::abs(e2 + 1.0) < 1e-12);
        CHECK(std::abs(e3 - 1.0) < 1e-12);
        CHECK(std::abs(e4 + 1.0) < 1e-12);
    }
    CHECK(rows == 65);
    std::remove("cli_spec.cfg");
    std::remove("cli_spec.csv");
}

TEST_CASE("a misspelled key exits 2 and names the key") {
    write_file("cli_bad.cfg", "coupling = ising_z\nthata = 0.5\n");
    const auto r = run("spectrum --config cli_bad.cfg");
    CHECK(r.exit_code == 2);
    CHECK(r.stdout_text.find("thata") != std::string::npos);
    CHECK(r.stdout_text.find("line 2") != std::string::npos);
    std::remove("cli_bad.cfg");
}

TEST_CASE("a collapsed second block shows a vanishing gap34 column") {
    write_file("cli_gap.cfg", "coupling = ising_z\ng = 1\ntheta = 0\nomega = 1.0\n");
    const auto r = run("spectrum --config cli_gap.cfg --out cli_gap.csv --n-steps 32 --quiet");
    REQUIRE(r.exit_code == 0);
    std::ifstream in("cli_gap.csv");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::abs(std::stod(line.substr(pos + 1))) < 1e-12);
    }
    std::remove("cli_gap.cfg");
    std::remove("cli_gap.csv");
}

TEST_CASE("evolve reports the expected slow-loop answers") {
    write_file("cli_ev.cfg",
               "coupling = ising_z\ng = 0\ntheta = 1.0471975511965976\nomega = 0.01\n"
               "seed_state = phi1\n");
    const auto r = run("evolve --config cli_ev.cfg --out cli_ev.csv");
    REQUIRE(r.exit_code == 0);

    // report block: geometric phase close to pi/2 at this rate
    const auto pos = r.stdout_text.find("geometric_phase  = ");
    REQUIRE(pos != std::string::npos);
    const double phase = std::stod(r.stdout_text.substr(pos + 19));
    CHECK(std::abs(phase - 1.5708) < 0.016);
    CHECK(r.stdout_text.find("regime=") != std::string::npos);

    // p1 column stays at 1 for a product-eigenstate seed
    std::ifstream in("cli_ev.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,c1_sq,c2_sq,c3_sq,c4_sq,p1,p2,R12,norm_drift");
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (int c = 0; c <= 5; ++c) std::getline(ss, cell, ',');
        CHECK(std::abs(std::stod(cell) - 1.0) < 1e-8);  // p1
    }
    std::remove("cli_ev.cfg");
    std::remove("cli_ev.csv");
}

TEST_CASE("evolve keeps the norm at fast default-accuracy rates") {
    write_file("cli_norm.cfg",
               "coupling = ising_z\ng = 1\ntheta = 1.0471975511965976\nomega = 1\n"
               "seed_state = phi1\n");
    const auto r = run("evolve --config cli_norm.cfg --out cli_norm.csv");
    REQUIRE(r.exit_code == 0);
    const auto pos = r.stdout_text.find("final_norm_drift = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.stdout_text.substr(pos + 19)) < 1e-9);
    std::remove("cli_norm.cfg");
    std::remove("cli_norm.csv");
}

TEST_CASE("the step guard surfaces as exit 3 with a suggestion") {
    write_file("cli_guard.cfg",
               "coupling = ising_z\ng = 3\ntheta = 1.5707963267948966\nomega = 0.3\n"
               "seed_state = phi1\nn_steps = 16\n");
    const auto r = run("evolve --config cli_guard.cfg --out cli_guard.csv");
    CHECK(r.exit_code == 3);
    CHECK(r.stdout_text.find("--n-steps") != std::string::npos);
    std::remove("cli_guard.cfg");
    std::remove("cli_guard.csv");
}

TEST_CASE("classify labels the reference runs") {
    write_file("cli_a.cfg",
               "coupling = ising_z\ng = 1\ntheta = 1.0471975511965976\nomega = 0.01\n"
               "seed_state = phi1\nn_steps = 131072\n");
    const auto ra = run("classify --config cli_a.cfg");
    REQUIRE(ra.exit_code == 0);
    CHECK(ra.stdout_text.rfind("regime=A", 0) == 0);

    write_file("cli_c.cfg",
               "coupling = none\ng = 0\ntheta = 1.5707963267948966\nomega = 10\n"
               "seed_state = phi1\n");
    const auto rc = run("classify --config cli_c.cfg");
    REQUIRE(rc.exit_code == 0);
    CHECK(rc.stdout_text.rfind("regime=C", 0) == 0);

    write_file("cli_b.cfg",
               "coupling = flip_flop\ng = 1\ntheta = 1.0471975511965976\nomega = 0.05\n"
               "seed_state = phi2\nn_steps = 16384\n");
    const auto rb = run("classify --config cli_b.cfg");
    REQUIRE(rb.exit_code == 0);
    const auto pos = rb.stdout_text.find("p_drift=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(rb.stdout_text.substr(pos + 8)) > 1e-3);
    CHECK(rb.stdout_text.rfind("regime=A", 0) != 0);
    CHECK(rb.stdout_text.rfind("regime=C", 0) != 0);

    std::remove("cli_a.cfg");
    std::remove("cli_b.cfg");
    std::remove("cli_c.cfg");
}

TEST_CASE("phases writes a complete one-row summary") {
    write_file("cli_ph.cfg",
               "coupling = ising_z\ng = 1\ntheta = 1.0471975511965976\nomega = 0.5\n"
               "seed_state = phi1\nn_steps = 8192\n");
    const auto r = run("phases --config cli_ph.cfg --out cli_ph.csv --quiet");
    REQUIRE(r.exit_code == 0);
    std::ifstream in("cli_ph.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header ==
          "total_phase,dynamical_phase,geometric_phase,cyclic_overlap,berry1,berry2,"
          "berry3,berry4,phi_18,phi_19");
    std::getline(in, row);
    CHECK(!row.empty());
    std::remove("cli_ph.cfg");
    std::remove("cli_ph.csv");
}

TEST_CASE("identical sweep configs produce byte-identical output") {
    write_file("cli_sw.cfg",
               "coupling = ising_z\nomega = 10\ntheta_count = 21\ng_count = 16\n"
               "g_max = 3\n");
    const auto r1 = run("sweep-gamma --config cli_sw.cfg --out cli_sw1.csv --jobs 2 --quiet");
    const auto r2 = run("sweep-gamma --config cli_sw.cfg --out cli_sw2.csv --jobs 1 --quiet");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    const std::string a = slurp("cli_sw1.csv");
    CHECK(!a.empty());
    CHECK(a == slurp("cli_sw2.csv"));
    CHECK(a.rfind("theta,g,gamma12,gamma34,singular12,singular34", 0) == 0);
    std::remove("cli_sw.cfg");
    std::remove("cli_sw1.csv");
    std::remove("cli_sw2.csv");
}

TEST_CASE("sweep range validation exits 2") {
    write_file("cli_swbad.cfg", "coupling = ising_z\nomega = 10\ntheta_count = 1\n");
    const auto r = run("sweep-gamma --config cli_swbad.cfg --out cli_swbad.csv");
    CHECK(r.exit_code == 2);
    std::remove("cli_swbad.cfg");
}

int main(int argc, char** argv) {
    // last non-flag argument is the binary under test
    int forwarded = argc;
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_binary = argv[argc - 1];
        forwarded = argc - 1;
    }
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-qadia-binary>\n");
        return 1;
    }
    doctest::Context ctx;
    ctx.applyCommandLine(forwarded, argv);
    return ctx.run();
}
