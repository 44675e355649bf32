#include <vector>

#include <gtest/gtest.h>

#include "seqcheck/replication.hpp"

using namespace seqcheck;

TEST(GroupFreeVolume, IsMinimumOfMembers) {
  EXPECT_EQ(group_free_volume(std::vector<FreeVolume>{5, 3, 9}, 3), 3u);
  EXPECT_THROW(group_free_volume(std::vector<FreeVolume>{5, 3}, 3), ContractError);
}

TEST(GroupConfig, Validation) {
  GroupConfig g{2, {{ServerNumber(0), ServerNumber(1)}, {ServerNumber(2), ServerNumber(3)}}};
  EXPECT_NO_THROW(g.validate());
  g.groups[1][0] = ServerNumber(1);
  EXPECT_THROW(g.validate(), ContractError);
  g.groups[1] = {ServerNumber(4)};
  EXPECT_THROW(g.validate(), ContractError);
  EXPECT_THROW((GroupConfig{0, {}}.validate()), ContractError);
}

TEST(ReplicatedWrite, GroupNumberDrivesDraw) {
  // Same draws as the single-copy case with groups in place of servers.
  GroupConfig g{2, {{ServerNumber(0), ServerNumber(1)}, {ServerNumber(2), ServerNumber(3)}}};
  const ParamTable t = ParamTable::from_vectors({1.0, 0.3}, {1.0, 0.6});
  const TableRand r({0.9, 0.5});
  const auto d = replicated_write(t, g, DataId(1), r);
  EXPECT_EQ(d.group, ServerNumber(0));
  EXPECT_EQ(d.fan_out, (std::vector<ServerNumber>{ServerNumber(0), ServerNumber(1)}));
  EXPECT_EQ(d.invalid_groups, std::vector<ServerNumber>{ServerNumber(1)});
  EXPECT_EQ(d.invalidate_members, (std::vector<ServerNumber>{ServerNumber(2), ServerNumber(3)}));
  EXPECT_THROW(replicated_write(ParamTable::from_vectors({1.0}, {1.0}), g, DataId(1), r), ContractError);
}

TEST(ReplicatedCluster, SurvivesOneDeadMemberPerGroup) {
  ReplicatedCluster c(2);
  c.add_group(std::vector<Bytes>{1000, 800});
  c.add_group(std::vector<Bytes>{1000, 1000});
  c.reconfigure();
  EXPECT_EQ(c.group_free(ServerNumber(0)), 800u);
  for (std::uint64_t id = 0; id < 300; ++id) ASSERT_TRUE(c.write(DataId(id), 1));
  c.kill(ServerNumber(0));
  c.kill(ServerNumber(3));
  for (std::uint64_t id = 0; id < 300; ++id) {
    const auto r = c.read(DataId(id));
    ASSERT_TRUE(r.location);
    EXPECT_FALSE(r.unavailable);
    EXPECT_TRUE(c.alive(r.location->server));
    EXPECT_EQ(r.location->version, 1u);
  }
}

TEST(ReplicatedCluster, WholeGroupDownIsUnavailable) {
  ReplicatedCluster c(2);
  c.add_group(std::vector<Bytes>{1000, 1000});
  c.add_group(std::vector<Bytes>{1000, 1000});
  c.reconfigure();
  for (std::uint64_t id = 0; id < 200; ++id) c.write(DataId(id), 1);
  c.kill(ServerNumber(2));
  c.kill(ServerNumber(3));
  std::size_t unavailable = 0;
  for (std::uint64_t id = 0; id < 200; ++id) {
    const auto r = c.read(DataId(id));
    const bool group1_candidate = is_read_candidate(c.params(), ServerNumber(1), DataId(id));
    EXPECT_EQ(r.unavailable, group1_candidate);
    if (!group1_candidate) {
      EXPECT_EQ(r.group, ServerNumber(0));
    }
    unavailable += r.unavailable;
  }
  EXPECT_GT(unavailable, 0u);
  c.revive(ServerNumber(2));
  for (std::uint64_t id = 0; id < 200; ++id) EXPECT_TRUE(c.read(DataId(id)).location);
}

TEST(ReplicatedCluster, RewriteInvalidatesEveryMember) {
  ReplicatedCluster c(3);
  c.add_group(std::vector<Bytes>{100, 100, 100});
  c.reconfigure();
  c.add_group(std::vector<Bytes>{100, 100, 100});
  c.reconfigure();
  for (std::uint64_t id = 0; id < 60; ++id) c.write(DataId(id), 1);
  c.add_group(std::vector<Bytes>{1000, 1000, 1000});
  c.reconfigure();
  for (std::uint64_t id = 0; id < 60; ++id) c.write(DataId(id), 1);
  for (std::uint64_t id = 0; id < 60; ++id) {
    const auto r = c.read(DataId(id));
    ASSERT_TRUE(r.location);
    EXPECT_EQ(r.location->version, 2u);
    // Any copy of version 1 still marked valid must sit in a group the
    // descending probe reaches only after the version-2 group.
    for (std::uint32_t s = 0; s < 9; ++s) {
      const auto& store = c.server(ServerNumber(s)).store;
      if (auto it = store.find(DataId(id)); it != store.end() && it->second.valid && it->second.version == 1) {
        EXPECT_LT(s / 3, r.group.value) << "id " << id;
      }
    }
  }
  EXPECT_THROW(c.add_group(std::vector<Bytes>{1}), ContractError);
  EXPECT_FALSE(c.write(DataId(99999), 5000));
}
