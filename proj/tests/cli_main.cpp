// Black-box checks of the command-line binary. argv[1] is the binary path;
// everything runs through a shell with outputs captured.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::fprintf(stderr, "FAIL: %s\n", what.c_str());
  }
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  if (st >= 0 && WIFEXITED(st)) r.code = WEXITSTATUS(st);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <binary>\n", argv[0]);
    return 1;
  }
  const std::string bin = argv[1];

  char tmpl[] = "/tmp/llcmp-cli-XXXXXX";
  const char* dirp = mkdtemp(tmpl);
  if (!dirp) {
    std::fprintf(stderr, "cannot create temp dir\n");
    return 1;
  }
  const std::string dir = dirp;

  const std::string m6 = dir + "/m6.json";
  write_file(m6,
             R"({"variables": [2,2,2,2,2,2],
                 "features": [[[0,0],[1,0],[4,0]], [[2,1],[3,1]]]})");
  const std::string m3 = dir + "/m3.json";
  write_file(m3, R"({"variables": [2,2,2], "features": [[[0,0],[1,0]]]})");
  const std::string m4 = dir + "/m4.json";
  write_file(m4, R"({"variables": [2,2,2,2], "features": []})");
  const std::string part5 = dir + "/part5.json";
  write_file(part5,
             R"({"variables": [2,2,2,2,2],
                 "features": [[[0,0],[1,0],[4,0]], [[0,0],[1,0],[3,0]]]})");
  const std::string capF = dir + "/capF.json";
  write_file(capF, R"({"variables": [3,3,3,3], "features": [[[0,0],[1,0]]]})");
  const std::string capG = dir + "/capG.json";
  write_file(capG,
             R"({"variables": [3,3,3,3],
                 "features": [[[0,0],[1,0],[2,0]], [[0,0],[1,0],[3,0]]]})");

  // Comparing a model to itself: zero distance over the full context count.
  {
    const RunResult r = run(bin + " compare " + m6 + " " + m6);
    expect(r.code == 0, "self compare exit code");
    expect(contains(r.out, "\"distance\": \"0\""), "self compare distance");
    expect(contains(r.out, "\"total\": \"240\""), "six-binary context total");
    expect(contains(r.out, "\"normalized_distance\": 0"), "normalized field");
  }

  // CSV rendering of the same counts.
  {
    const RunResult r = run(bin + " compare --format csv " + m6 + " " + m6);
    expect(r.code == 0, "csv compare exit code");
    expect(contains(r.out, "distance,0"), "csv distance row");
    expect(contains(r.out, "total,240"), "csv total row");
  }

  // Cross-checked comparison prints a verdict.
  {
    const RunResult r =
        run(bin + " compare --oracle --check " + part5 + " " + m4 + "  ");
    expect(r.code == 2, "mismatched domains are a validation error");
    const RunResult ok = run(bin + " compare --oracle --check " + m6 + " " + m6);
    expect(ok.code == 0, "checked compare exit code");
    expect(contains(ok.out, "\"verdict\": \"MATCH\""), "checked compare verdict");
  }

  // Per-pair breakdown is optional and off by default.
  {
    const RunResult off = run(bin + " compare " + m6 + " " + m6);
    expect(!contains(off.out, "per_pair"), "per-pair absent by default");
    const RunResult on = run(bin + " compare --per-pair " + m6 + " " + m6);
    expect(contains(on.out, "\"per_pair\""), "per-pair present on request");
  }

  // The expansion cap: trips via flag, trips via environment, and the default
  // is generous enough for this pair (which then shows its four misses).
  {
    const RunResult capped =
        run(bin + " compare --max-union-terms 1 " + capF + " " + capG);
    expect(capped.code == 3, "cap via flag");
    const RunResult env =
        run("LLCMP_MAX_UNION_TERMS=1 " + bin + " compare " + capF + " " + capG);
    expect(env.code == 3, "cap via environment");
    const RunResult fine = run(bin + " compare " + capF + " " + capG);
    expect(fine.code == 0, "default cap suffices");
    expect(contains(fine.out, "\"fn\": \"4\""), "expansion counts four misses");
  }

  // Partition listing shows the disjoint members and their joint coverage.
  {
    const RunResult r = run(bin + " partition --pair 0 1 " + part5);
    expect(r.code == 0, "partition exit code");
    expect(contains(r.out, "<X4=0>"), "first member");
    expect(contains(r.out, "<X3=0,X4=1>"), "second member");
    expect(contains(r.out, "coverage: 6"), "partition coverage");
  }

  // Census table for four binary variables.
  {
    const RunResult r = run(bin + " census --vars 4 --card 2");
    expect(r.code == 0, "census exit code");
    expect(contains(r.out, "context_vars,free_vars,count"), "census header");
    expect(contains(r.out, "0,0,6"), "census fully-free row");
    expect(contains(r.out, "1,1,24"), "census mixed row");
    expect(contains(r.out, "total,96"), "census total");
  }

  // Random model generation is deterministic per seed.
  {
    const std::string g1 = dir + "/g1.json", g2 = dir + "/g2.json";
    const RunResult r1 = run(bin + " gen --vars 5 --features 6 --seed 3 --out " + g1);
    const RunResult r2 = run(bin + " gen --vars 5 --features 6 --seed 3 --out " + g2);
    expect(r1.code == 0 && r2.code == 0, "gen exit codes");
    const std::string one = read_file(g1);
    expect(!one.empty() && one == read_file(g2), "gen determinism");

    // The generated file round-trips through compare against itself.
    const RunResult self = run(bin + " compare " + g1 + " " + g1);
    expect(self.code == 0 && contains(self.out, "\"distance\": \"0\""),
           "generated model self-compare");
    const RunResult checked =
        run(bin + " compare --oracle --check " + part5 + " " + g1);
    expect(checked.code == 0 && contains(checked.out, "\"verdict\": \"MATCH\""),
           "generated model cross-check");
  }

  // Usage errors: bad flags and impossible arities.
  {
    expect(run(bin + " compare " + m6).code == 1, "missing operand");
    expect(run(bin + " nonsense").code == 1, "unknown command");
    expect(run(bin + " gen --vars 3 --max-arity 9").code == 1,
           "arity beyond the domain");
  }

  // An empty experiment still emits the CSV header and nothing else.
  {
    const RunResult r = run(bin + " kl-experiment --n 0");
    expect(r.code == 0, "empty experiment exit code");
    expect(r.out == "structure_id,mode,fp,fn,error_pct,kl_nats,iterations,grad_norm\n",
           "empty experiment emits the bare header");
  }

  if (failures == 0) std::printf("cli checks passed\n");
  return failures == 0 ? 0 : 1;
}
