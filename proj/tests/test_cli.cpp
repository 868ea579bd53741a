#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csi/cli.hpp"
#include "support/test_support.hpp"

using csi::testing::TempDir;
using nlohmann::json;

namespace {

const std::string kData = CSI_TESTDATA_DIR;

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome csi_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = csi::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> records(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

std::vector<json> of_type(const std::vector<json>& rs, const std::string& type) {
    std::vector<json> out;
    for (const auto& r : rs) {
        if (r.value("type", "") == type) out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_CASE("ingest then chains reconstructs three intrusions") {
    TempDir dir;
    const auto repo = dir.path().string();
    const auto ing = csi_run({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"});
    REQUIRE(ing.code == 0);
    const auto summary = of_type(records(ing.out), "ingest");
    REQUIRE(summary.size() == 1);
    CHECK(summary[0]["events_added"] == 13);

    const auto ch = csi_run({"--repo", repo, "chains"});
    REQUIRE(ch.code == 0);
    const auto rs = records(ch.out);
    CHECK(rs.front()["type"] == "header");
    CHECK(rs.front()["params"]["gap"] == 86400);
    CHECK(of_type(rs, "intrusion").size() == 3);

    // re-ingesting the same file changes nothing
    const auto again = csi_run({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"});
    CHECK(again.code == 0);
    CHECK(of_type(records(again.out), "ingest")[0]["events_added"] == 0);
}

TEST_CASE("correlate, coa plan and report on the sample corpus") {
    TempDir dir;
    const auto repo = dir.path().string();
    REQUIRE(csi_run({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"}).code == 0);

    const auto cor = csi_run({"--repo", repo, "correlate", "--profiles", kData + "/profiles.jsonl"});
    REQUIRE(cor.code == 0);
    const auto camps = of_type(records(cor.out), "campaign");
    REQUIRE(camps.size() == 1);
    CHECK(camps[0]["members"].size() == 3);
    CHECK(camps[0]["attribution"]["actor"] == "transnational_group");

    const auto plan = csi_run({"--repo", repo, "coa", "plan", "--capabilities", kData + "/capabilities.jsonl",
                               "--campaign", "campaign-1"});
    REQUIRE(plan.code == 0);
    std::set<std::string> phases;
    for (const auto& r : of_type(records(plan.out), "plan_row")) phases.insert(r["phase"].get<std::string>());
    CHECK(phases == std::set<std::string>{"delivery", "c2"});

    const auto missing = csi_run({"--repo", repo, "coa", "plan", "--capabilities", kData + "/capabilities.jsonl",
                                  "--campaign", "campaign-9"});
    CHECK(missing.code == 1);

    const auto human = csi_run({"--repo", repo, "--format", "human", "coa", "plan", "--capabilities",
                                kData + "/capabilities.jsonl", "--campaign", "campaign-1"});
    CHECK(human.code == 0);
    CHECK(human.out.find("GAP") != std::string::npos);

    const auto rep = csi_run({"--repo", repo, "report", "--capabilities", kData + "/capabilities.jsonl"});
    CHECK(rep.code == 0);
    CHECK(of_type(records(rep.out), "tactical").size() == 1);
}

TEST_CASE("derived commands leave the repository alone unless asked to save") {
    TempDir dir;
    const auto repo = dir.path().string();
    REQUIRE(csi_run({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"}).code == 0);
    REQUIRE(csi_run({"--repo", repo, "chains"}).code == 0);
    CHECK_FALSE(std::filesystem::exists(dir.path() / "intrusions.jsonl"));
    REQUIRE(csi_run({"--repo", repo, "chains", "--save"}).code == 0);
    CHECK(std::filesystem::exists(dir.path() / "intrusions.jsonl"));
}

TEST_CASE("input errors exit 1") {
    TempDir dir;
    const auto repo = dir.path().string();
    const auto bad = csi_run({"--repo", repo, "correlate", "--threshold", "1.1"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("threshold") != std::string::npos);

    CHECK(csi_run({"--repo", repo, "chains", "--no-such-flag"}).code == 1);
    CHECK(csi_run({"--repo", repo}).code == 1);
    CHECK(csi_run({"--repo", repo, "ingest", kData + "/does-not-exist.jsonl"}).code == 1);
    CHECK(csi_run({"--repo", repo, "--format", "xml", "chains"}).code == 1);
}

TEST_CASE("malformed event lines are reported with their line numbers") {
    TempDir dir;
    const auto file = dir.path() / "events.jsonl";
    {
        std::ofstream out(file);
        out << R"({"id":"a","at":1,"target":"t","sensor":"s","phase":"delivery","outcome":"attempted","indicators":[]})"
            << '\n'
            << "{not json\n";
    }
    const auto r = csi_run({"--repo", (dir.path() / "repo").string(), "ingest", file.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find(":2:") != std::string::npos);
}

TEST_CASE("simulate is byte-identical across runs") {
    TempDir dir;
    const auto repo = dir.path().string();
    const auto a = csi_run({"--repo", repo, "simulate", "--scenario", kData + "/s1.json"});
    const auto b = csi_run({"--repo", repo, "simulate", "--scenario", kData + "/s1.json"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rs = of_type(records(a.out), "simresult");
    REQUIRE(rs.size() == 1);
    CHECK(rs[0]["stopped_at"] == "weaponization");
    CHECK(rs[0]["posture_ratio"] == 1.25);
}

TEST_CASE("coa compare ranks the registry candidates") {
    const auto r = csi_run({"coa", "compare", "--candidates", kData + "/candidates.jsonl", "--capabilities",
                            kData + "/capabilities.jsonl", "--weights", "1,1,0"});
    REQUIRE(r.code == 0);
    const auto scores = of_type(records(r.out), "candidate_score");
    REQUIRE(scores.size() == 3);
    CHECK(scores[0]["name"] == "perimeter");
    CHECK(csi_run({"coa", "compare", "--candidates", kData + "/candidates.jsonl", "--capabilities",
                   kData + "/capabilities.jsonl", "--weights", "0,0,0"})
              .code == 1);
}

TEST_CASE("qualify validates corroborated indicators once") {
    TempDir dir;
    const auto repo = dir.path().string();
    REQUIRE(csi_run({"--repo", repo, "ingest", kData + "/sample_corpus.jsonl"}).code == 0);
    const auto first = csi_run({"--repo", repo, "qualify", "--sources", kData + "/sources.jsonl"});
    REQUIRE(first.code == 0);
    const auto summary = of_type(records(first.out), "qualify_summary");
    REQUIRE(summary.size() == 1);
    CHECK(summary[0]["actionable"] == 4);
    CHECK(summary[0]["validated"] == 1);

    const auto second = csi_run({"--repo", repo, "qualify", "--sources", kData + "/sources.jsonl"});
    CHECK(of_type(records(second.out), "qualify_summary")[0]["validated"] == 0);

    // a stricter corroboration floor leaves nothing actionable
    const auto strict =
        csi_run({"--repo", repo, "qualify", "--sources", kData + "/sources.jsonl", "--corroboration", "3"});
    CHECK(of_type(records(strict.out), "qualify_summary")[0]["actionable"] == 0);
    CHECK(csi_run({"--repo", repo, "qualify", "--sources", kData + "/sources.jsonl", "--reliability", "2"}).code == 1);
}
