// Copyright 2026 The skinaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skinaudit/dataset.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "skinaudit/error.hpp"
#include "skinaudit/png_io.hpp"
#include "test_util.hpp"

namespace skinaudit::dataset {
namespace {

using testing::Rng;
using testing::ScratchDir;

ParseOptions NoFileCheck() { return {"/data", false}; }

Manifest Synthetic(std::size_t n) {
  Manifest m;
  m.corpus = "synthetic";
  for (std::size_t i = 0; i < n; ++i) {
    m.records.push_back({"r" + std::to_string(i), "/img/" + std::to_string(i) + ".png"});
  }
  return m;
}

TEST(ParseManifest, WellFormed) {
  const Manifest m = ParseManifest(
      "# comment\n"
      "corpus ecu\n"
      "\n"
      "id=a image=img/a.png mask=gt/a.png skin_type=III\n"
      "id=b image=/abs/b.png faces=10,12,40,48;70,8,32,32 group=asian\n"
      "id=c image=\"with space/c.png\" prediction=p/c.png skin_type=mix\n",
      NoFileCheck());
  EXPECT_EQ(m.corpus, "ecu");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.records[0].image, "/data/img/a.png");
  EXPECT_EQ(m.records[0].mask, std::filesystem::path("/data/gt/a.png"));
  EXPECT_EQ(m.records[0].skin_type, bias::SkinTone::kIII);
  EXPECT_EQ(m.records[1].image, "/abs/b.png");
  ASSERT_EQ(m.records[1].faces.size(), 2u);
  EXPECT_EQ(m.records[1].faces[1], (bias::FaceRect{70, 8, 32, 32}));
  EXPECT_EQ(m.records[1].group, "asian");
  EXPECT_FALSE(m.records[1].mask.has_value());
  EXPECT_EQ(m.records[2].image, "/data/with space/c.png");
  EXPECT_EQ(m.records[2].skin_type, bias::SkinTone::kMix);
}

void ExpectError(const std::string& text, const std::string& fragment, std::size_t line) {
  try {
    ParseManifest(text, NoFileCheck());
    FAIL() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(ParseManifest, Errors) {
  ExpectError("id=a image=x.png\nid=a image=y.png\n", "duplicate id 'a'", 2);
  ExpectError("id=a image=x.png colour=red\n", "unknown field", 1);
  ExpectError("id=a\n", "no image", 1);
  ExpectError("image=x.png\n", "no id", 1);
  ExpectError("id=a image=x.png skin_type=VIII\n", "skin_type", 1);
  ExpectError("id=a image=x.png faces=1,2,3\n", "x,y,w,h", 1);
  ExpectError("id=a image=x.png faces=1,2,0,4\n", "zero area", 1);
  ExpectError("id=a image=\"x.png\n", "unterminated", 1);
  ExpectError("id=a image\n", "key=value", 1);
  ExpectError("# only comments\n", "no records", 1);
}

TEST(LoadManifest, ChecksFilesExist) {
  ScratchDir dir("manifest");
  io::WriteRgb(dir / "a.png", RgbImage(2, 2));
  std::ofstream(dir / "m.txt") << "id=a image=a.png mask=missing.png\n";
  try {
    LoadManifest(dir / "m.txt");
    FAIL();
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("missing.png"), std::string::npos) << what;
    EXPECT_NE(what.find("m.txt:1"), std::string::npos) << what;
  }
  EXPECT_EQ(LoadManifest(dir / "m.txt", false).size(), 1u);
  std::ofstream(dir / "ok.txt") << "id=a image=a.png\nid=b image=a.png\nid=c image=a.png\n";
  EXPECT_EQ(LoadManifest(dir / "ok.txt").size(), 3u);
  EXPECT_THROW(LoadManifest(dir / "absent.txt"), IoError);
}

TEST(SerializeManifest, RoundTrip) {
  Manifest m;
  m.corpus = "rt";
  m.records.push_back({"a", "/root/data/img/a.png", std::filesystem::path("/root/data/gt/a.png"),
                       bias::SkinTone::kII, {{1, 2, 3, 4}, {5, 6, 7, 8}},
                       std::filesystem::path("/elsewhere/p a.png"), std::string("latino")});
  m.records.push_back({"b", "/root/data/img/b.png"});
  const std::string text = SerializeManifest(m, "/root/data");
  const Manifest back = ParseManifest(text, {"/root/data", false});
  EXPECT_EQ(back.corpus, m.corpus);
  EXPECT_EQ(back.records, m.records);
  EXPECT_NE(text.find("image=img/a.png"), std::string::npos) << text;
}

TEST(Masks, ThresholdAndRoundTrip) {
  ScratchDir dir("mask");
  const std::uint8_t gray[] = {0, 127, 128, 255};
  io::WriteGray(dir / "g.png", 4, 1, gray);
  const BinaryMask m = LoadMask(dir / "g.png");
  EXPECT_EQ(std::vector<std::uint8_t>(m.bits().begin(), m.bits().end()),
            (std::vector<std::uint8_t>{0, 0, 1, 1}));
  EXPECT_EQ(LoadMask(dir / "g.png", 200).count(), 1u);

  // Color masks use luma.
  RgbImage rgb(3, 1);
  rgb[0] = {255, 255, 255};
  rgb[1] = {255, 0, 0};  // luma 76
  rgb[2] = {0, 255, 0};  // luma 150
  io::WriteRgb(dir / "c.png", rgb);
  const BinaryMask c = LoadMask(dir / "c.png");
  EXPECT_TRUE(c[0]);
  EXPECT_FALSE(c[1]);
  EXPECT_TRUE(c[2]);

  Rng rng(1);
  const BinaryMask random = testing::RandomMask(rng, 33, 17);
  SaveMask(dir / "r.png", random);
  EXPECT_EQ(LoadMask(dir / "r.png"), random);
  EXPECT_THROW(LoadMask(dir / "nope.png"), IoError);
}

TEST(ProbabilityMaps, ExchangeFormat) {
  ScratchDir dir("prob");
  const std::uint8_t values[] = {0, 128, 255};
  io::WriteGray(dir / "p.png", 3, 1, values);
  const ProbabilityMap pm = LoadProbabilityMap(dir / "p.png");
  EXPECT_EQ(pm[0], 0.0);
  EXPECT_DOUBLE_EQ(pm[1], 128.0 / 255.0);
  EXPECT_EQ(pm[2], 1.0);

  Rng rng(2);
  const ProbabilityMap random = testing::RandomProbabilities(rng, 9, 9);
  SaveProbabilityMap(dir / "q.png", random);
  const ProbabilityMap back = LoadProbabilityMap(dir / "q.png");
  for (std::size_t i = 0; i < random.size(); ++i) {
    ASSERT_LE(std::abs(back[i] - random[i]), 0.5 / 255.0 + 1e-12);
    ASSERT_GE(back[i], 0.0);
    ASSERT_LE(back[i], 1.0);
  }
}

TEST(LoadPredictions, ValidatesAgainstImage) {
  ScratchDir dir("preds");
  io::WriteRgb(dir / "a.png", RgbImage(4, 3));
  const std::vector<std::uint8_t> full(12, 255), wrong(6, 0);
  io::WriteGray(dir / "pa.png", 4, 3, full);
  io::WriteGray(dir / "pw.png", 2, 3, wrong);
  std::ofstream(dir / "m.txt") << "id=a image=a.png prediction=pa.png\n";
  const auto preds = LoadPredictions(LoadManifest(dir / "m.txt"));
  ASSERT_EQ(preds.size(), 1u);
  for (double p : preds[0].values()) ASSERT_EQ(p, 1.0);

  std::ofstream(dir / "w.txt") << "id=a image=a.png prediction=pw.png\n";
  EXPECT_THROW(LoadPredictions(LoadManifest(dir / "w.txt")), InvalidArgument);
  std::ofstream(dir / "n.txt") << "id=a image=a.png\n";
  EXPECT_THROW(LoadPredictions(LoadManifest(dir / "n.txt")), InvalidArgument);
}

TEST(Split, FortyTenFiftyProportions) {
  const Manifest m = Synthetic(4000);
  const Split s = SplitManifest(m, {0.4, 0.1, 0.5}, 42);
  EXPECT_EQ(s.train.size(), 1600u);
  EXPECT_EQ(s.val.size(), 400u);
  EXPECT_EQ(s.test.size(), 2000u);
}

TEST(Split, DisjointExhaustiveDeterministic) {
  const Manifest m = Synthetic(101);
  const Split a = SplitManifest(m, {0.33, 0.33, 0.34}, 7);
  const Split b = SplitManifest(m, {0.33, 0.33, 0.34}, 7);
  EXPECT_EQ(a.train.records, b.train.records);
  EXPECT_EQ(a.val.records, b.val.records);
  EXPECT_EQ(a.test.records, b.test.records);
  std::set<std::string> ids;
  for (const Manifest* part : {&a.train, &a.val, &a.test}) {
    for (const auto& r : part->records) EXPECT_TRUE(ids.insert(r.id).second) << r.id;
  }
  EXPECT_EQ(ids.size(), 101u);
  EXPECT_EQ(a.train.size(), 33u);
  EXPECT_EQ(a.val.size(), 33u);
  EXPECT_EQ(a.test.size(), 35u);
  EXPECT_NE(SplitManifest(m, {0.33, 0.33, 0.34}, 8).train.records, a.train.records);
}

TEST(Split, EdgeFractions) {
  const Manifest m = Synthetic(10);
  const Split all = SplitManifest(m, {1, 0, 0}, 1);
  EXPECT_EQ(all.train.size(), 10u);
  EXPECT_EQ(all.val.size() + all.test.size(), 0u);
  EXPECT_THROW(SplitManifest(m, {0.5, 0.5, 0.5}, 1), InvalidArgument);
  EXPECT_THROW(SplitManifest(m, {-0.1, 0.6, 0.5}, 1), InvalidArgument);
}

}  // namespace
}  // namespace skinaudit::dataset
