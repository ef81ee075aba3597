// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

#include "bethe/config.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace bethe;

TEST(ConfigParseTest, ValuesSectionsAndComments) {
    const auto t = ConfigTable::parse_string(R"(
# leading comment
top = 3
[tree]
N = 3               # generations
branching = [3, 2, 4]
gamma = 0.5
[run]
out = "dir # not a comment"
plot = false
)");
    EXPECT_EQ(t.integer("top"), 3);
    EXPECT_EQ(t.integer("tree.N"), 3);
    EXPECT_EQ(t.array("tree.branching"), (std::vector<double>{3, 2, 4}));
    EXPECT_EQ(t.number("tree.gamma"), 0.5);
    EXPECT_EQ(t.string("run.out"), "dir # not a comment");
    EXPECT_EQ(t.boolean("run.plot"), false);
    EXPECT_FALSE(t.number("missing").has_value());
    EXPECT_EQ(t.unknown_keys(known_config_keys()), std::vector<std::string>{"top"});
}

TEST(ConfigParseTest, Errors) {
    EXPECT_THROW(ConfigTable::parse_string("[tree\nN = 1"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("N 1"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string(" = 1"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = "), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = 1x"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = \"open"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = [1, 2"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = [1, b]"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = 1\na = 2"), ConfigError);
    EXPECT_THROW(ConfigTable::parse_string("a = nan"), ConfigError);
    EXPECT_THROW(ConfigTable::load("/nonexistent/bethe.toml"), ConfigError);
    const auto t = ConfigTable::parse_string("a = \"x\"\nb = 1.5");
    EXPECT_THROW(t.number("a"), ConfigError);
    EXPECT_THROW(t.integer("b"), ConfigError);
    EXPECT_THROW(t.array("b"), ConfigError);
}

TEST(ConfigParseTest, ErrorMessageCarriesLocation) {
    try {
        ConfigTable::parse_string("ok = 1\n\nbad line");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos);
    }
}

TEST(TreeFromConfigTest, Variants) {
    const auto a = tree_from_config(ConfigTable::parse_string("[tree]\nN = 2\nbranching = [2, 3]\ngamma = 0.4"));
    EXPECT_EQ(a.branching, (std::vector<int>{2, 3}));
    EXPECT_EQ(a.gamma0, 0.4);
    EXPECT_EQ(a.gammaN, 0.4);
    const auto b = tree_from_config(ConfigTable::parse_string("[tree]\nN = 3\nbranching = 2\ngamma0 = 0.2\ngammaN = 0.7"));
    EXPECT_EQ(b.branching, (std::vector<int>{2, 2, 2}));
    EXPECT_EQ(b.gamma0, 0.2);
    EXPECT_EQ(b.gammaN, 0.7);
    const auto c = tree_from_config(ConfigTable::parse_string("[tree]\nN = 1\nbranching = [3]\ngamma = 0.5\ngammaN = 0.9"));
    EXPECT_EQ(c.gamma0, 0.5);
    EXPECT_EQ(c.gammaN, 0.9);
}

TEST(TreeFromConfigTest, Rejections) {
    const auto bad = [](const std::string &s) { return tree_from_config(ConfigTable::parse_string(s)); };
    EXPECT_THROW(bad("[tree]\nbranching = [2]\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 2\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 1\nbranching = [2]"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 2\nbranching = [2]\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 1\nbranching = [0]\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 1\nbranching = [2.5]\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 1\nbranching = [2]\ngamma = 0"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 0\nbranching = []\ngamma = 1"), ConfigError);
    EXPECT_THROW(bad("[tree]\nN = 1.5\nbranching = [2]\ngamma = 1"), ConfigError);
}

TEST(ConfigFileTest, LoadFromDisk) {
    const std::string path = testing::TempDir() + "bethe_config_test.toml";
    {
        std::ofstream out(path);
        out << "[tree]\nN = 2\nbranching = [2, 2]\ngamma = 0.3\n";
    }
    const auto spec = tree_from_config(ConfigTable::load(path));
    EXPECT_EQ(spec.total_sites(), 7);
    std::remove(path.c_str());
}
