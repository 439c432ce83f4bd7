#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "perturb/edge_list.hpp"
#include "perturb/graph.hpp"
#include "perturb/harness.hpp"

namespace fs = std::filesystem;
using namespace perturb;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PERTURB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("perturb_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_graph(const std::string& name, const Graph& g) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  write_edge_list(out, g);
  return p;
}

}  // namespace

TEST_CASE("sample writes a re-readable, reproducible edge list") {
  const fs::path a = scratch() / "a.el", b = scratch() / "b.el";
  REQUIRE(run("sample --n 100 --p 0.05 --seed 7 --out " + a.string()).code == 0);
  REQUIRE(run("sample --n 100 --p 0.05 --seed 7 --out " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  std::ifstream in(a);
  const Graph g = read_edge_list(in);
  CHECK(g.vertex_count() == 100);
  CHECK(g.edge_count() > 150);
  CHECK(g.edge_count() < 350);

  CHECK(run("sample --n 100 --p 0.05 --seed 8").out != slurp(a));
}

TEST_CASE("bad flags exit 2 and name the flag") {
  const Run r = run("sample --n 100 --p 1.5 --seed 7");
  CHECK(r.code == 2);
  CHECK(r.out.find("--p") != std::string::npos);
  CHECK(run("sample --n 100 --p 0.1 --bogus 1").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("sample --n 100 --p 0.1 --lambda 3").code == 2);
  CHECK(run("solve --graph /nonexistent/file.el").code == 2);
}

TEST_CASE("malformed graph files are runtime errors") {
  const fs::path p = scratch() / "bad.el";
  std::ofstream(p) << "3 1\n0 7\n";
  const Run r = run("solve --graph " + p.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("line 2") != std::string::npos);
}

TEST_CASE("solve verdicts") {
  const Run c5 = run("solve --graph " + write_graph("c5.el", cycle_graph(5)).string());
  CHECK(c5.code == 0);
  CHECK(c5.out.rfind("HAMILTONIAN\n", 0) == 0);
  CHECK(c5.out.find("cycle: ") != std::string::npos);

  const fs::path star = write_graph("star.el", star_graph(4));
  const Run heuristic = run("solve --graph " + star.string());
  CHECK(heuristic.code == 0);
  CHECK(heuristic.out.rfind("EXHAUSTED", 0) == 0);
  const Run exact = run("solve --exact --graph " + star.string());
  CHECK(exact.code == 3);
  CHECK(exact.out.rfind("NON-HAMILTONIAN", 0) == 0);

  const Run petersen =
      run("solve --exact --graph " + write_graph("petersen.el", petersen_graph()).string());
  CHECK(petersen.code == 3);
  CHECK(petersen.out.rfind("NON-HAMILTONIAN", 0) == 0);

  const fs::path cert = scratch() / "c5.cert";
  CHECK(run("solve --certificate " + cert.string() + " --graph " +
            write_graph("c5b.el", cycle_graph(5)).string())
            .code == 0);
  CHECK(slurp(cert).rfind("cycle 5", 0) == 0);
}

TEST_CASE("solve on a generated perturbed graph") {
  const Run r = run("solve --n 300 --alpha 0.1 --family bipartite --lambda 8 --seed 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("HAMILTONIAN", 0) == 0);
}

TEST_CASE("certify exit codes") {
  const Run p5 = run("certify --mode expander --k 1 --graph " +
                     write_graph("p5.el", path_graph(5)).string());
  CHECK(p5.code == 3);
  CHECK(p5.out.find("witness: 0") != std::string::npos);
  const Run k9 = run("certify --mode expander --k 2 --graph " +
                     write_graph("k9.el", complete_graph(9)).string());
  CHECK(k9.code == 0);
  CHECK(k9.out.find("certified") != std::string::npos);
  const Run rnd = run("certify --mode expander --randomized --k 2 --graph " +
                      write_graph("k9b.el", complete_graph(9)).string());
  CHECK(rnd.code == 0);
  CHECK(rnd.out.find("not-falsified") != std::string::npos);

  const Run e123 = run("certify --mode e123 --n 4000 --alpha 0.02 --lambda 20 --budget 50 --seed 1");
  CHECK(e123.code == 0);
  CHECK(e123.out.find("E3: not-falsified") != std::string::npos);

  const Run h1 = run("certify --mode h1 --n 2000 --alpha 0.05 --family bipartite --seed 2");
  CHECK(h1.code == 3);
  CHECK(h1.out.find("connected: yes") != std::string::npos);
}

TEST_CASE("sweep writes CSV and plot data") {
  const fs::path csv = scratch() / "s.csv", tsv = scratch() / "s.tsv";
  const Run r = run("sweep --n 120 --alpha 0.1 --c 0.5,4 --trials 8 --seed 5 --jobs 2 --out " +
                    csv.string() + " --plotdata " + tsv.string());
  CHECK(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("c,p,trials,ham_freq,ham_lo,ham_hi,obs_freq,obs_lo,obs_hi\n", 0) == 0);
  CHECK(text.find("# p_half=") != std::string::npos);
  const std::string plot = slurp(tsv);
  CHECK(plot.find("0.5\t") != std::string::npos);
  CHECK(plot.find("4\t") != std::string::npos);

  CHECK(run("sweep --n 120 --alpha 0.1 --c 2,1 --trials 2").code == 2);
}

TEST_CASE("obstruct table") {
  const Run zero = run("obstruct --n 200 --alpha 0.1 --eta 1 --trials 5 --seed 1");
  CHECK(zero.code == 0);
  std::istringstream in(zero.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "eta\tp\tA\tEY\tmean_Y\tvar_Y\tcertified_rate");
  // p = 0: Y = |B| = 180 in every trial.
  CHECK(row.rfind("1\t0\t20\t180\t180\t0\t1", 0) == 0);

  const Run regime = run("obstruct --n 1000 --alpha 0.1 --eta 0.1 --trials 50 --seed 1");
  CHECK(regime.code == 0);
  std::istringstream rin(regime.out);
  std::getline(rin, header);
  std::getline(rin, row);
  std::istringstream fields(row);
  double eta = 0, p = 0, a = 0, ey = 0, mean = 0, var = 0, rate = 0;
  fields >> eta >> p >> a >> ey >> mean >> var >> rate;
  CHECK(ey == doctest::Approx(expected_isolated_in_B(1000, 0.1, p)).epsilon(1e-6));
  CHECK(rate >= 0.9);
}

TEST_CASE("help documents every flag") {
  for (const char* sub : {"sample", "solve", "sweep", "certify", "obstruct"}) {
    const Run r = run(std::string(sub) + " --help");
    CHECK(r.code == 0);
    CHECK(r.out.find("--seed") != std::string::npos);
    CHECK(r.out.find("--config") != std::string::npos);
  }
  CHECK(run("sweep --help").out.find("--plotdata") != std::string::npos);
  CHECK(run("solve --help").out.find("--exact") != std::string::npos);
}

TEST_CASE("config file provides defaults and flags override") {
  const fs::path cfg = scratch() / "sample.conf";
  std::ofstream(cfg) << "# defaults\nn = 50\np = 0.1\nseed = 4\n";
  const Run from_file = run("sample --config " + cfg.string());
  const Run explicit_flags = run("sample --n 50 --p 0.1 --seed 4");
  CHECK(from_file.code == 0);
  CHECK(from_file.out == explicit_flags.out);
  const Run overridden = run("sample --config " + cfg.string() + " --seed 9");
  CHECK(overridden.out == run("sample --n 50 --p 0.1 --seed 9").out);
  CHECK(overridden.out != from_file.out);

  std::ofstream(scratch() / "bad.conf") << "bogus = 1\n";
  CHECK(run("sample --config " + (scratch() / "bad.conf").string()).code == 2);
}
