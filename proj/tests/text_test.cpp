#include <gtest/gtest.h>

#include "ctxsearch/text.h"

using namespace ctxsearch;

TEST(Tokenize, SplitsPunctuationOff) {
  EXPECT_EQ(text::tokenize("Rhubarb, a plant."),
            (std::vector<std::string>{"Rhubarb", ",", "a", "plant", "."}));
}

TEST(Tokenize, KeepsInnerApostrophesAndHyphens) {
  EXPECT_EQ(text::tokenize("it's well-known"), (std::vector<std::string>{"it's", "well-known"}));
  EXPECT_EQ(text::tokenize("'quoted' -dash"),
            (std::vector<std::string>{"'", "quoted", "'", "-", "dash"}));
}

TEST(Tokenize, EmptyAndBlank) {
  EXPECT_TRUE(text::tokenize("").empty());
  EXPECT_TRUE(text::tokenize("  \t ").empty());
}

TEST(Text, Punctuation) {
  EXPECT_TRUE(text::isPunctuation(","));
  EXPECT_TRUE(text::isPunctuation("..."));
  EXPECT_FALSE(text::isPunctuation("a."));
  EXPECT_FALSE(text::isPunctuation(""));
}

TEST(Text, LowerLeavesMultibyteAlone) {
  EXPECT_EQ(text::toLower("ÄBc"), "\xC3\x84" "bc");
}

TEST(Text, Utf8Prefix) {
  EXPECT_EQ(text::utf8Prefix("edible", 4), "edib");
  EXPECT_EQ(text::utf8Prefix("ed", 4), "ed");
  EXPECT_EQ(text::utf8Prefix("\xC3\xA4\xC3\xB6x", 2), "\xC3\xA4\xC3\xB6");
  EXPECT_EQ(text::utf8Length("\xC3\xA4\xC3\xB6x"), 3u);
}

TEST(Text, NameKey) {
  EXPECT_EQ(text::nameKey("Plant part"), "plant_part");
  EXPECT_EQ(text::nameKey("plant_part"), "plant_part");
}

TEST(Text, SplitTrim) {
  EXPECT_EQ(text::split("a\tb\t", '\t'), (std::vector<std::string>{"a", "b", ""}));
  EXPECT_EQ(text::trim("  x y "), "x y");
  EXPECT_TRUE(text::startsWith("edible", "edi"));
  EXPECT_FALSE(text::startsWith("ed", "edi"));
}
