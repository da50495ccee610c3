#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "slotswapper/errors.hpp"
#include "slotswapper/feasibility.hpp"
#include "slotswapper/io.hpp"

using namespace slotswapper;
namespace fs = std::filesystem;

namespace {

struct TempDir : ::testing::Test {
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("slotswapper_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
};

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Formats, TopologyRoundTrip) {
  const auto g = fixtures::example_graph();
  const auto back = io::parse_topology(io::format_topology(g));
  EXPECT_EQ(back.node_count(), 6);
  EXPECT_EQ(back.access_point(), 0);
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), back.edges().begin(), back.edges().end()));
  EXPECT_THROW(io::parse_topology(R"({"nodes": 2, "access_points": [0], "edges": [[0, 5]]})"), FormatError);
  EXPECT_THROW(io::parse_topology(R"({"nodes": 2})"), FormatError);
}

TEST(Formats, FlowsRoundTrip) {
  const auto g = fixtures::example_graph();
  const auto flows = fixtures::example_flows(&g);
  const auto back = io::parse_flows(io::format_flows(flows), &g);
  ASSERT_EQ(back.size(), 3U);
  for (const Flow& f : flows.flows()) {
    const Flow& b = back.flow(f.id);
    EXPECT_EQ(b.route, f.route);
    EXPECT_EQ(b.period, f.period);
    EXPECT_EQ(b.deadline, f.deadline);
  }
  EXPECT_THROW(io::parse_flows(R"({"flows": []})"), FormatError);
}

TEST(Formats, ScheduleCsvAndJsonRoundTrip) {
  const auto flows = fixtures::example_flows();
  const auto s1 = fixtures::schedule_s1(flows);
  const std::string csv = io::format_schedule_csv(s1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "slot,channel,flow_id,instance,hop,sender,receiver");
  EXPECT_NE(csv.find("\n1,1,1,1,1,1,2\n"), std::string::npos);
  EXPECT_NE(csv.find("\n2,1,idle,,,,\n"), std::string::npos);
  EXPECT_EQ(to_schedule(io::parse_schedule_csv(csv)), s1);
  EXPECT_EQ(to_schedule(io::parse_schedule_json(io::format_schedule_json(s1))), s1);
  EXPECT_THROW(io::parse_schedule_csv("slot,channel\n1,1,x,1,1,1,2\n"), FormatError);
  EXPECT_THROW(io::parse_schedule_csv("1,1,1\n"), FormatError);
}

TEST(Formats, DuplicateCellRowsSurviveParsing) {
  const std::string csv =
      "slot,channel,flow_id,instance,hop,sender,receiver\n"
      "1,1,1,1,1,1,2\n"
      "1,1,3,1,1,2,3\n";
  const auto rows = io::parse_schedule_csv(csv);
  EXPECT_EQ(rows.rows.size(), 2U);
  EXPECT_EQ(check_no_collision(rows).size(), 1U);
}

TEST_F(TempDir, PoolRoundTripAndTamperDetection) {
  const auto flows = fixtures::example_flows();
  const SchedulePool pool{{fixtures::schedule_s1(flows), fixtures::schedule_s2(flows)}, 17};
  io::write_pool(dir, pool);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const auto back = io::read_pool(dir);
  EXPECT_EQ(back.seed, 17U);
  EXPECT_EQ(back.schedules, pool.schedules);

  io::write_text(dir / "schedule_0001.csv", io::format_schedule_csv(pool.schedules[0]));
  EXPECT_THROW(io::read_pool(dir), FormatError);
  fs::remove(dir / "schedule_0001.csv");
  EXPECT_THROW(io::read_pool(dir), FormatError);
}

TEST_F(TempDir, ScheduleFileByExtension) {
  const auto flows = fixtures::example_flows();
  const auto s2 = fixtures::schedule_s2(flows);
  io::write_schedule(dir / "s2.json", s2);
  io::write_schedule(dir / "s2.csv", s2);
  EXPECT_EQ(io::read_schedule(dir / "s2.json"), s2);
  EXPECT_EQ(io::read_schedule(dir / "s2.csv"), s2);
  EXPECT_THROW(io::read_schedule(dir / "missing.csv"), FormatError);
}
