#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <csignal>
#include <thread>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "httplib.h"
#include "tgame/json_io.hpp"
#include "tgame/service.hpp"

namespace fs = std::filesystem;
using tgame::testing::fixture_path;
using tgame::testing::read_file;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(TGAME_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("tgame_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kCorpus = fixture_path("expected/corpus_all_levels.jsonl");

}  // namespace

TEST_CASE("build-corpus reproduces the stored corpus") {
  TempDir tmp;
  const auto r = run("build-corpus --input " + fixture_path("corpus") + " --levels 2,3,4,5 --output " +
                     (tmp / "a.jsonl"));
  CHECK(r.code == 0);
  CHECK(read_file(tmp / "a.jsonl") == read_file(kCorpus));
  CHECK(run("build-corpus --input " + fixture_path("corpus") + " --levels 5,4,3,2 --output " +
            (tmp / "b.jsonl"))
            .code == 0);
  CHECK(read_file(tmp / "b.jsonl") == read_file(kCorpus));
}

TEST_CASE("build-corpus on an empty directory writes an empty file") {
  TempDir tmp;
  fs::create_directories(tmp.path / "in");
  CHECK(run("build-corpus --input " + (tmp / "in") + " --output " + (tmp / "out.jsonl")).code == 0);
  CHECK(read_file(tmp / "out.jsonl").empty());
}

TEST_CASE("build-corpus exit codes") {
  TempDir tmp;
  CHECK(run("build-corpus --input " + fixture_path("corpus") + " --levels 7 --output " +
            (tmp / "x.jsonl"))
            .code == 1);
  CHECK(run("build-corpus --input " + (tmp / "missing") + " --output " + (tmp / "x.jsonl")).code ==
        2);
  CHECK(run("build-corpus --output " + (tmp / "x.jsonl")).code == 1);
  CHECK(run("no-such-command").code == 1);
  fs::create_directories(tmp.path / "bad");
  std::ofstream(tmp / "bad/broken.tml") << "<TimeML><TEXT>unclosed</TimeML>";
  CHECK(run("build-corpus --input " + (tmp / "bad") + " --output " + (tmp / "x.jsonl")).code == 1);
}

TEST_CASE("stats") {
  // Hand counts: level-2 texts have 8, 8, 7, 9, 6, 6, 6, 10, 10, 10 tokens and
  // every level-2 game holds four cross labels.
  const auto r = run("stats " + kCorpus);
  CHECK(r.code == 0);
  CHECK(r.out.find("2                80         20          0         20        0         10") !=
        std::string::npos);
  const auto j = run("stats --json " + kCorpus);
  CHECK(j.code == 0);
  const auto parsed = tgame::io::Json::parse(j.out);
  CHECK(parsed["levels"][0]["tokens"] == 80);
  CHECK(parsed["levels"][1]["tokens"] == 57);
  CHECK(parsed["levels"][1]["games"] == 6);
  CHECK(parsed["levels"][2]["games"] == 1);
  CHECK(run("stats /nonexistent/corpus.jsonl").code == 2);
}

TEST_CASE("validate") {
  TempDir tmp;
  CHECK(run("validate " + kCorpus).code == 0);

  auto lines = read_file(kCorpus);
  const auto pos = lines.find("\"relation\":\"<\"");
  REQUIRE(pos != std::string::npos);
  lines.replace(pos, 14, "\"relation\":\"-\"");
  std::ofstream(tmp / "vague.jsonl") << lines;
  CHECK(run("validate " + (tmp / "vague.jsonl")).code == 1);

  std::ofstream(tmp / "cycle.jsonl")
      << R"({"game_id":"c","doc_id":"d","level":3,"text":"Document creation time: x a b c",)"
      << R"("entities":[{"id":"a","text":"a","start":26,"end":27,"kind":"instant","is_dct":false},)"
      << R"({"id":"b","text":"b","start":28,"end":29,"kind":"instant","is_dct":false},)"
      << R"({"id":"c","text":"c","start":30,"end":31,"kind":"instant","is_dct":false}],)"
      << R"("gold":[{"source":"a.point","target":"b.point","relation":"<"},)"
      << R"({"source":"b.point","target":"c.point","relation":"<"},)"
      << R"({"source":"c.point","target":"a.point","relation":"<"}]})"
      << "\n";
  CHECK(run("validate " + (tmp / "cycle.jsonl")).code == 1);
  std::ofstream(tmp / "junk.jsonl") << "{not json\n";
  CHECK(run("validate " + (tmp / "junk.jsonl")).code == 2);
  CHECK(run("stats " + (tmp / "junk.jsonl")).code == 2);
}

TEST_CASE("scripted play session") {
  const auto r = run("play --corpus " + kCorpus + " --level 2 --seed 1 < " +
                     fixture_path("play_input.txt"));
  CHECK(r.code == 0);
  CHECK(r.out == read_file(fixture_path("play_transcript.txt")));
  // Three correct steps and completion.
  CHECK(r.out.find("terminal +10 (won_coherent)") != std::string::npos);
  CHECK(r.out.find("final score 13") != std::string::npos);
  CHECK(run("play --corpus " + kCorpus + " --level 5").code == 1);
  CHECK(run("play --corpus /nonexistent.jsonl --level 2").code == 2);
}

TEST_CASE("serve fails cleanly without a corpus") {
  CHECK(run("serve --corpus /nonexistent/corpus.jsonl --port 0").code == 2);
}

namespace {

int free_port() {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  return port;
}

}  // namespace

TEST_CASE("serve answers health checks and snapshots on shutdown") {
  TempDir tmp;
  const int port = free_port();
  REQUIRE(port > 0);
  const std::string snapshot = tmp / "snap.json";
  const pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::setenv("TG_SEED", "5", 1);
    ::setenv("TG_SNAPSHOT_PATH", snapshot.c_str(), 1);
    const std::string port_s = std::to_string(port);
    std::freopen("/dev/null", "w", stderr);
    ::execl(TGAME_CLI, TGAME_CLI, "serve", "--corpus", kCorpus.c_str(), "--port", port_s.c_str(),
            static_cast<char*>(nullptr));
    std::_Exit(127);
  }
  httplib::Client client("127.0.0.1", port);
  httplib::Result health;
  for (int i = 0; i < 100 && !health; ++i) {
    health = client.Get("/api/health");
    if (!health) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  REQUIRE(health);
  CHECK(health->status == 200);
  const auto game = client.Post("/api/games", R"({"level": 2})", "application/json");
  REQUIRE(game);
  CHECK(game->status == 200);

  // Same seed, same first game through the in-process service.
  tgame::ServiceConfig config;
  config.seed = 5;
  tgame::Api api(config, tgame::GameCorpus::load(kCorpus));
  const auto direct = api.handle("POST", "/api/games", "", R"({"level": 2})", "application/json");
  CHECK(tgame::io::Json::parse(game->body)["game_id"] ==
        tgame::io::Json::parse(direct.body)["game_id"]);

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  const auto snap = tgame::io::Json::parse(read_file(snapshot));
  CHECK(snap["episodes"].size() == 1);
}
