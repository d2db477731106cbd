// Copyright 2026 The Resonance Lab Authors
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

#include "resonance/resonance.h"

#include <gtest/gtest.h>

#include <string>

namespace {

// Owns a report string returned by the library.
std::string Take(char* text) {
  std::string out = text == nullptr ? "" : text;
  rsn_string_free(text);
  return out;
}

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    char* json = nullptr;
    ASSERT_EQ(rsn_generate("figure1", nullptr, &json), RSN_OK);
    figure1_ = Take(json);
    ASSERT_EQ(rsn_scenario_load_json(figure1_.c_str(), &scenario_), RSN_OK);
  }
  void TearDown() override { rsn_scenario_free(scenario_); }

  std::string figure1_;
  rsn_scenario* scenario_ = nullptr;
};

TEST_F(CApiTest, VersionAndStatusNames) {
  EXPECT_FALSE(std::string(rsn_version()).empty());
  EXPECT_STREQ(rsn_status_name(RSN_OK), "ok");
  EXPECT_STREQ(rsn_status_name(RSN_ERR_MALFORMED_INPUT), "malformed_input");
}

TEST_F(CApiTest, RunFigure1) {
  char* report = nullptr;
  int rejected = -1;
  ASSERT_EQ(rsn_run(scenario_, RSN_FORMAT_JSON, &report, &rejected), RSN_OK);
  const std::string text = Take(report);
  EXPECT_EQ(rejected, 0);
  EXPECT_NE(text.find("\"winner\": \"b1\""), std::string::npos) << text;
  EXPECT_NE(text.find("\"reported_surplus\": \"4\""), std::string::npos);
}

TEST_F(CApiTest, RunReportsRejection) {
  // Both brokers charge t1 more than its value, breaking individual
  // rationality of the selected proposal.
  std::string json = figure1_;
  const std::string from = "\"t1\": \"2\"";
  int replaced = 0;
  for (auto pos = json.find(from); pos != std::string::npos;
       pos = json.find(from, pos)) {
    json.replace(pos, from.size(), "\"t1\": \"7\"");
    ++replaced;
  }
  ASSERT_EQ(replaced, 2) << json;
  rsn_scenario* s = nullptr;
  ASSERT_EQ(rsn_scenario_load_json(json.c_str(), &s), RSN_OK);
  char* report = nullptr;
  int rejected = -1;
  ASSERT_EQ(rsn_run(s, RSN_FORMAT_JSON, &report, &rejected), RSN_OK);
  const std::string text = Take(report);
  EXPECT_EQ(rejected, 1);
  EXPECT_NE(text.find("\"ir_violator\": \"t1\""), std::string::npos) << text;
  rsn_scenario_free(s);
}

TEST_F(CApiTest, SetParamValidates) {
  EXPECT_EQ(rsn_scenario_set_param(scenario_, "quantum", "1/4"), RSN_OK);
  EXPECT_EQ(rsn_scenario_set_param(scenario_, "quantum", "-1"),
            RSN_ERR_MALFORMED_INPUT);
  EXPECT_NE(std::string(rsn_last_error()).find("quantum"), std::string::npos);
  EXPECT_EQ(rsn_scenario_set_param(scenario_, "bogus", "1"),
            RSN_ERR_MALFORMED_INPUT);
  char* json = nullptr;
  ASSERT_EQ(rsn_scenario_to_json(scenario_, &json), RSN_OK);
  EXPECT_NE(Take(json).find("\"1/4\""), std::string::npos);
}

TEST_F(CApiTest, MalformedJson) {
  rsn_scenario* s = nullptr;
  EXPECT_EQ(rsn_scenario_load_json("{\"kind\": 3}", &s),
            RSN_ERR_MALFORMED_INPUT);
  EXPECT_EQ(s, nullptr);
  EXPECT_NE(std::string(rsn_last_error()).find("/kind"), std::string::npos);
  EXPECT_EQ(rsn_scenario_load_file("/nonexistent/file.json", &s),
            RSN_ERR_MALFORMED_INPUT);
}

TEST_F(CApiTest, NullArguments) {
  char* report = nullptr;
  int rejected = 0;
  EXPECT_EQ(rsn_run(nullptr, RSN_FORMAT_JSON, &report, &rejected),
            RSN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rsn_run(scenario_, RSN_FORMAT_JSON, nullptr, &rejected),
            RSN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rsn_scenario_load_json(nullptr, nullptr),
            RSN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rsn_generate(nullptr, nullptr, &report), RSN_ERR_INVALID_ARGUMENT);
  rsn_scenario_free(nullptr);
  rsn_string_free(nullptr);
}

TEST_F(CApiTest, Equilibrium) {
  char* report = nullptr;
  ASSERT_EQ(rsn_equilibrium(scenario_, "pne", RSN_FORMAT_JSON, &report),
            RSN_OK);
  EXPECT_NE(Take(report).find("\"is_pne\""), std::string::npos);
  EXPECT_EQ(rsn_equilibrium(scenario_, "nash", RSN_FORMAT_JSON, &report),
            RSN_ERR_MALFORMED_INPUT);
  ASSERT_EQ(rsn_equilibrium(scenario_, "dsic-barring-b", RSN_FORMAT_CSV,
                            &report),
            RSN_OK);
  EXPECT_EQ(Take(report).rfind("agent,kind,", 0), 0u);
}

TEST_F(CApiTest, BenchmarksNeedResourceMarket) {
  char* report = nullptr;
  EXPECT_EQ(rsn_benchmarks(scenario_, RSN_FORMAT_JSON, &report),
            RSN_ERR_PRECONDITION);
}

TEST(CApiGenerateTest, GeneratedFamilyBenchmarks) {
  char* json = nullptr;
  ASSERT_EQ(rsn_generate("thm-fee", "{\"k\": 3}", &json), RSN_OK);
  rsn_scenario* s = nullptr;
  ASSERT_EQ(rsn_scenario_load_json(Take(json).c_str(), &s), RSN_OK);
  char* report = nullptr;
  ASSERT_EQ(rsn_benchmarks(s, RSN_FORMAT_CSV, &report), RSN_OK);
  const std::string csv = Take(report);
  EXPECT_NE(csv.find("fee,3/4,true"), std::string::npos) << csv;
  EXPECT_NE(csv.find("opt,1,true"), std::string::npos) << csv;
  rsn_scenario_free(s);

  EXPECT_EQ(rsn_generate("thm-of", "{\"d\": 2}", &json), RSN_ERR_PRECONDITION);
  EXPECT_EQ(rsn_generate("nope", nullptr, &json), RSN_ERR_MALFORMED_INPUT);
}

}  // namespace
