#include <gtest/gtest.h>

#include <map>
#include <regex>

#include "dispersal/models/builders.h"
#include "dispersal/prism/export.h"
#include "test_util.h"

using namespace dispersal;

namespace {

/// Action labels of all commands, counted by scanning for `[name]`.
std::map<std::string, int> command_actions(const std::string& text) {
    std::map<std::string, int> out;
    std::regex command(R"(^\s*\[(\w*)\])");
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::smatch m;
        if (std::regex_search(line, m, command)) ++out[m[1]];
    }
    return out;
}

}  // namespace

TEST(Prism, SingleSliceHasOneBusyPair) {
    const std::string text = prism::export_prism(test::params(1, 1, 1, 1, 1, {Rational(1, 2)}), models::Attacker::Slice);
    EXPECT_EQ(command_actions(text)["busy"], 2);
    const auto client = text.find("module client");
    const auto attacker = text.find("module slice_attacker");
    ASSERT_NE(client, std::string::npos);
    ASSERT_NE(attacker, std::string::npos);
    EXPECT_EQ(text.substr(0, 4), "mdp\n");
    EXPECT_NE(text.find("label \"hacked\" = pc_a=done;"), std::string::npos);
    EXPECT_NE(text.find("const int done = 2;"), std::string::npos);
    EXPECT_NE(text.find("1/2:"), std::string::npos);
}

TEST(Prism, CommandsMatchTemplates) {
    auto p = test::params(4, 3, 4, 2, 3, {Rational(1, 10), Rational(1, 5), Rational(3, 10)});
    for (auto attacker : {models::Attacker::Slice, models::Attacker::Provider})
        for (auto client : {models::ClientKind::Full, models::ClientKind::Abstract}) {
            const auto program = models::build_program(p, attacker, client);
            std::map<std::string, int> expected;
            for (const auto& mod : program.modules)
                for (const auto& t : mod.templates) ++expected[t.action];
            EXPECT_EQ(command_actions(prism::export_prism(program)), expected);
        }
}

TEST(Prism, Deterministic) {
    auto p = test::params(3, 2, 3, 2, 3, {Rational(1, 10), Rational(3, 10)});
    EXPECT_EQ(prism::export_prism(p, models::Attacker::Provider), prism::export_prism(p, models::Attacker::Provider));
}

TEST(Prism, ProviderNamesSentinels) {
    auto text = prism::export_prism(test::params(3, 2, 3, 2, 3, {Rational(1, 10), Rational(3, 10)}),
                                    models::Attacker::Provider);
    EXPECT_NE(text.find("const int done = 3;"), std::string::npos);
    EXPECT_NE(text.find("const int failed = 4;"), std::string::npos);
    EXPECT_NE(text.find("(pc_a'=failed)"), std::string::npos);
}
