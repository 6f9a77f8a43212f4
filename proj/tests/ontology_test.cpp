#include <gtest/gtest.h>

#include "ctxsearch/error.h"
#include "ctxsearch/ontology.h"
#include "support/fixtures.h"

using namespace ctxsearch;

namespace {

std::size_t loadErrorLine(const std::string& tsv) {
  try {
    Ontology::parseString(tsv);
  } catch (const LoadError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Ontology, FixtureTaxonomy) {
  auto o = test::plantsOntology();
  auto plant = *o.findClass("Plant");
  auto broccoli = *o.findEntity("Broccoli");
  EXPECT_TRUE(o.isInstanceOf(broccoli, plant));
  EXPECT_TRUE(o.isInstanceOf(broccoli, o.rootClass()));
  EXPECT_FALSE(o.isInstanceOf(*o.findEntity("Europe"), plant));
  EXPECT_EQ(o.instancesOf(plant).size(), 3u);
  EXPECT_TRUE(o.isSubclassOf(*o.findClass("Vegetable"), plant));
  EXPECT_FALSE(o.isSubclassOf(plant, *o.findClass("Vegetable")));
}

TEST(Ontology, IdsFollowNameOrder) {
  auto o = test::plantsOntology();
  for (std::uint32_t i = 1; i < o.numEntities(); ++i) {
    EXPECT_LT(o.entityName(EntityId{i - 1}), o.entityName(EntityId{i}));
  }
}

TEST(Ontology, NameLookupVariants) {
  auto o = test::plantsOntology();
  EXPECT_TRUE(o.findClass("Plant part"));
  EXPECT_EQ(o.findClass("Plant_part"), o.findClass("Plant part"));
  EXPECT_EQ(o.findClass("plant_part"), o.findClass("Plant part"));
  EXPECT_FALSE(o.findEntity("Cabbage"));
}

TEST(Ontology, RelationsAndImages) {
  auto o = test::plantsOntology();
  const auto* native = o.findRelation("native-to");
  ASSERT_NE(native, nullptr);
  EXPECT_EQ(native->forward.size(), 3u);
  std::vector<EntityId> sources{*o.findEntity("Broccoli")};
  auto image = o.relationImage("native-to", Direction::Forward, sources);
  EXPECT_EQ(image.at(*o.findEntity("Broccoli")), std::vector<EntityId>{*o.findEntity("Europe")});
  EXPECT_EQ(o.findRelation("grows-on"), nullptr);
}

TEST(Ontology, GenderDefaultsToNeuterOutsidePersons) {
  auto o = Ontology::parseString(
      "class\tPerson\tsubclass-of\tEntity\nclass\tGender\tsubclass-of\tEntity\n"
      "instance\tAda\tis-a\tPerson\ninstance\tBob\tis-a\tPerson\ninstance\tfemale\tis-a\tGender\n"
      "instance\tRock\tis-a\tEntity\nrelation\thas-gender\tPerson\tGender\n"
      "fact\tAda\thas-gender\tfemale\n");
  EXPECT_EQ(o.gender(*o.findEntity("Ada")), Gender::Female);
  EXPECT_EQ(o.gender(*o.findEntity("Bob")), Gender::Unknown);
  EXPECT_EQ(o.gender(*o.findEntity("Rock")), Gender::Neuter);
}

TEST(Ontology, ErrorsCiteLines) {
  EXPECT_EQ(loadErrorLine("class\tA\tsubclass-of\tEntity\nclass\tB\tsubclass-of\n"), 2u);
  auto cycle = loadErrorLine("# c\nclass\tA\tsubclass-of\tB\nclass\tB\tsubclass-of\tA\n");
  EXPECT_TRUE(cycle == 2u || cycle == 3u) << cycle;
  EXPECT_EQ(loadErrorLine("instance\tX\tis-a\tNoSuchClass\n"), 1u);
  EXPECT_EQ(loadErrorLine("class\tA\tsubclass-of\tEntity\ninstance\tx\tis-a\tA\n"
                          "relation\tr\tA\tA\nfact\tx\tr\ty\n"),
            4u);
  EXPECT_EQ(loadErrorLine("frob\ta\tb\tc\n"), 1u);
}

TEST(Ontology, FactTypingViolationIsAnError) {
  EXPECT_THROW(Ontology::parseString("class\tA\tsubclass-of\tEntity\nclass\tB\tsubclass-of\tEntity\n"
                                     "instance\tx\tis-a\tA\ninstance\ty\tis-a\tB\n"
                                     "relation\tr\tA\tA\nfact\tx\tr\ty\n"),
               LoadError);
}

TEST(Ontology, CorruptedFixtureLine7) {
  try {
    Ontology::load(test::dataPath("ontology_bad_line7.tsv"));
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find(":7:"), std::string::npos);
  }
}

TEST(Ontology, FingerprintDependsOnContent) {
  auto a = Ontology::parseString("instance\tx\tis-a\tEntity\n");
  auto b = Ontology::parseString("instance\ty\tis-a\tEntity\n");
  EXPECT_EQ(a.fingerprint(), Ontology::parseString("instance\tx\tis-a\tEntity\n").fingerprint());
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}
