#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int mfcsim(const std::string& args, const std::string& capture = {}) {
  std::string cmd = std::string(MFCSIM_PATH) + " " + args;
  cmd += capture.empty() ? " >/dev/null 2>&1" : " >" + capture + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  fs::path p = fs::current_path() / "cli_out" / name;
  fs::remove_all(p);
  return p;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("list prints sorted scenarios and plants") {
    const auto out = fresh("list");
    fs::create_directories(out);
    REQUIRE(mfcsim("list", (out / "list.txt").string()) == 0);
    const auto text = slurp(out / "list.txt");
    CHECK(text.find("sys1-fault") != std::string::npos);
    CHECK(text.find("ultralocal") != std::string::npos);
    CHECK(text.find("estimator-bench") < text.find("sys1-fault"));
    CHECK(text.find("sys1-fault") < text.find("ultralocal-cancel"));
  }

  TEST_CASE("run writes the full bundle") {
    const auto out = fresh("run");
    REQUIRE(mfcsim("run --config scenarios/ultralocal-cancel --out " + out.string() +
                   " --set grid.n_steps=2000") == 0);
    for (const char* f : {"trace.csv", "metrics.txt", "config.echo", "plot.gp"})
      CHECK(fs::exists(out / f));
    const auto trace = slurp(out / "trace.csv");
    CHECK(trace.rfind("t,y_ref,y_true,y_meas,e,f_est,u,v,pi\n", 0) == 0);
    CHECK(count_lines(trace) == 2001);
    const auto second = trace.substr(trace.find('\n') + 1);
    const auto row = second.substr(0, second.find('\n'));
    CHECK(std::count(row.begin(), row.end(), ',') == 8);
  }

  TEST_CASE("re-running the echoed config reproduces the trace") {
    const auto a = fresh("echo_a"), b = fresh("echo_b");
    REQUIRE(mfcsim("run -c sys2-fault -o " + a.string() + " --set grid.n_steps=3000 --set noise_std=0.01") == 0);
    REQUIRE(mfcsim("run -c " + (a / "config.echo").string() + " -o " + b.string()) == 0);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "config.echo") == slurp(b / "config.echo"));
  }

  TEST_CASE("invalid configs exit with status 1 and name the violation") {
    const auto out = fresh("invalid");
    fs::create_directories(out);
    const auto log = (out / "err.txt").string();
    CHECK(mfcsim("run -c sys1-nominal -o " + out.string() + " --set tau=1e-4", log) == 1);
    CHECK(slurp(log).find("tau must be at least 2 * grid.dt") != std::string::npos);
    CHECK(mfcsim("run -c no-such-thing -o " + out.string()) == 1);
    CHECK(mfcsim("run -c sys1-nominal -o " + out.string() + " --set bogus=1") == 1);
    CHECK(mfcsim("frobnicate") == 1);
  }

  TEST_CASE("kp = 0 removes the convergence") {
    const auto out = fresh("kp0");
    REQUIRE(mfcsim("run -c ultralocal-cancel -o " + out.string() + " --set gains.kp=0") == 0);
    const auto metrics = slurp(out / "metrics.txt");
    const auto pos = metrics.find("final_error: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(metrics.substr(pos + 13)) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("divergence exits with status 2 and still writes output") {
    const auto out = fresh("diverge");
    CHECK(mfcsim("run -c ultralocal-cancel -o " + out.string() +
                 " --set plant.f=1e12 --set estimator_kind=recursive") == 2);
    CHECK(fs::exists(out / "trace.csv"));
  }

  TEST_CASE("instrumented runs report op counts") {
    const auto out = fresh("ops");
    REQUIRE(mfcsim("run -c sys1-nominal -o " + out.string() +
                   " --set grid.n_steps=500 --set estimator_kind=recursive --instrument-ops") == 0);
    CHECK(slurp(out / "metrics.txt").find("ops.") != std::string::npos);
  }

  TEST_CASE("sweep over sample period and noise") {
    const auto out = fresh("sweep_dt");
    REQUIRE(mfcsim("sweep -c ultralocal-cancel -k grid.dt --values 1e-4,2e-4 -o " + out.string() +
                   " --set grid.n_steps=1000") == 0);
    CHECK(count_lines(slurp(out / "sweep.csv")) == 3);
    // Horizon is held at 0.1 s.
    CHECK(count_lines(slurp(out / "1_2e-4" / "trace.csv")) == 501);

    const auto noise = fresh("sweep_noise");
    REQUIRE(mfcsim("sweep -c sys1-nominal -k noise_std --values 0,0.01 -o " + noise.string() +
                   " --set grid.n_steps=2000") == 0);
    CHECK(fs::exists(noise / "0_0" / "metrics.txt"));
    CHECK(fs::exists(noise / "1_0.01" / "metrics.txt"));
  }

  TEST_CASE("sweep rejects empty value lists and non-numeric keys") {
    const auto out = fresh("sweep_bad");
    CHECK(mfcsim("sweep -c sys1-nominal -k noise_std --values '' -o " + out.string()) == 1);
    CHECK(mfcsim("sweep -c sys1-nominal -k noise_std -o " + out.string()) == 1);
    CHECK(mfcsim("sweep -c sys1-nominal -k setpoint --values 1 -o " + out.string()) == 1);
  }
}
