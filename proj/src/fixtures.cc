// Copyright 2026 The formlink Authors.
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

#include "formlink/fixtures.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string_view>

#include "formlink/errors.h"

namespace formlink {

namespace {

constexpr double kPageWidth = 762;
constexpr double kPageBottom = 930;
constexpr double kCharWidth = 6.5;
constexpr double kLineHeight = 12;

enum class FieldType {
  kName, kDate, kPhone, kAmount, kAddress, kBrand, kQuantity, kCode
};
constexpr int kFieldTypes = 8;

constexpr std::string_view kQuestions[kFieldTypes][5] = {
    {"NAME:", "Name:", "SUBMITTED BY:", "CONTACT:", "FROM:"},
    {"DATE:", "Date:", "DATE RECEIVED:", "DUE DATE:", "Start Date"},
    {"PHONE:", "TEL NO.:", "FAX:", "Phone No.", "Telephone:"},
    {"TOTAL COST:", "AMOUNT:", "BUDGET:", "Cost", "Total $"},
    {"ADDRESS:", "CITY/STATE:", "Location:", "Street", "Mail to:"},
    {"BRAND:", "Brand(s):", "PRODUCT:", "Brand Name", "Product:"},
    {"QUANTITY:", "NO. OF UNITS:", "Qty", "Number of cases:", "Units"},
    {"PROJECT NO.:", "CODE:", "Account #", "Job No.", "Ref."},
};

constexpr std::string_view kOrphanQuestions[] = {
    "SIGNATURE:", "COMMENTS:", "APPROVED BY:", "REMARKS", "Other:",
    "Initials", "CC:",
};

constexpr std::string_view kHeaders[] = {
    "MARKETING REQUEST FORM", "PROMOTION EVALUATION", "RESEARCH PROPOSAL",
    "PURCHASE ORDER", "MEDIA SCHEDULE", "FAX TRANSMITTAL",
};

constexpr std::string_view kTableRows[] = {
    "Printing:", "Postage:", "Materials:", "Labor:", "Shipping:", "Display:",
};

constexpr std::string_view kFirstNames[] = {
    "JOHN", "Mary", "R. J.", "Susan", "DAVID", "Karen", "T. L.", "Robert",
};
constexpr std::string_view kLastNames[] = {
    "SMITH", "Jones", "Reynolds", "WALKER", "Harper", "Mitchell", "Brown",
};
constexpr std::string_view kMonths[] = {
    "January", "March", "June", "August", "October", "December",
};
constexpr std::string_view kStreets[] = {
    "Main Street", "Park Ave.", "Reynolds Blvd", "Oak Drive", "Fifth Ave",
};
constexpr std::string_view kCities[] = {
    "Winston-Salem, NC", "New York, NY", "Richmond, VA", "Atlanta, GA",
};
constexpr std::string_view kBrands[] = {
    "WINSTON", "Salem Lights", "CAMEL FILTERS", "Doral", "VANTAGE",
    "More Menthol",
};
constexpr std::string_view kOthers[] = {
    "Page 1 of 2", "CONFIDENTIAL", "Please return by fax", "Revised",
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Form MakeForm(std::string name);

 private:
  std::size_t Below(std::size_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = 0;
    do {
      x = rng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }
  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  int Integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(Below(static_cast<std::size_t>(hi - lo + 1)));
  }
  bool Chance(double p) { return Uniform(0, 1) < p; }
  template <typename T, std::size_t N>
  std::string Pick(const T (&items)[N]) {
    return std::string(items[Below(N)]);
  }

  std::string AnswerText(FieldType type);
  std::string QuestionText(FieldType type) {
    return std::string(kQuestions[static_cast<int>(type)][Below(5)]);
  }
  FieldType RandomType() { return static_cast<FieldType>(Below(kFieldTypes)); }

  EntityId Add(EntityLabel label, const std::string& text, double x, double y);
  void Link(EntityId a, EntityId b);
  const Entity& Get(EntityId id) const {
    return entities_[static_cast<std::size_t>(id)];
  }

  // Lays out one key/value field in a column; returns the lines it used.
  int Field(double x, double y);
  double Table(double y);

  std::mt19937_64 rng_;
  std::vector<Entity> entities_;
  std::vector<EntityId> questions_;
};

std::string Generator::AnswerText(FieldType type) {
  char buf[64];
  switch (type) {
    case FieldType::kName:
      return Pick(kFirstNames) + " " + Pick(kLastNames);
    case FieldType::kDate:
      if (Chance(0.6)) {
        std::snprintf(buf, sizeof buf, "%d/%d/%02d", Integer(1, 12),
                      Integer(1, 28), Integer(80, 99));
      } else {
        std::snprintf(buf, sizeof buf, "%s %d, 19%d", Pick(kMonths).c_str(),
                      Integer(1, 28), Integer(80, 99));
      }
      return buf;
    case FieldType::kPhone:
      std::snprintf(buf, sizeof buf, Chance(0.5) ? "(%03d) %03d-%04d"
                                                 : "%03d-%03d-%04d",
                    Integer(201, 919), Integer(200, 999), Integer(0, 9999));
      return buf;
    case FieldType::kAmount:
      if (Chance(0.5)) {
        std::snprintf(buf, sizeof buf, "$%d,%03d.00", Integer(1, 99),
                      Integer(0, 999));
      } else {
        std::snprintf(buf, sizeof buf, "$%d", Integer(50, 999));
      }
      return buf;
    case FieldType::kAddress:
      if (Chance(0.5)) {
        std::snprintf(buf, sizeof buf, "%d %s", Integer(10, 9999),
                      Pick(kStreets).c_str());
        return buf;
      }
      return Pick(kCities);
    case FieldType::kBrand:
      return Pick(kBrands);
    case FieldType::kQuantity:
      if (Chance(0.5)) {
        std::snprintf(buf, sizeof buf, "%d,%03d", Integer(1, 40),
                      Integer(0, 999));
      } else {
        std::snprintf(buf, sizeof buf, "%d cases", Integer(2, 500));
      }
      return buf;
    case FieldType::kCode:
      std::snprintf(buf, sizeof buf, "%c%c-%d", 'A' + Integer(0, 25),
                    'A' + Integer(0, 25), Integer(100, 9999));
      return buf;
  }
  return "";
}

EntityId Generator::Add(EntityLabel label, const std::string& text, double x,
                        double y) {
  Entity e;
  e.id = static_cast<EntityId>(entities_.size());
  e.label = label;
  e.text = text;
  double width = std::round(kCharWidth * static_cast<double>(text.size()) +
                            Uniform(0, 6));
  x = std::round(std::clamp(x, 5.0, kPageWidth - 5 - width));
  y = std::round(y);
  e.box = BBox{x, y, x + width, y + kLineHeight};

  // Words share the entity box in proportion to their length.
  double cursor = x;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) {
      std::string word = text.substr(start, end - start);
      double w = std::round(width * static_cast<double>(word.size()) /
                            static_cast<double>(text.size()));
      double right = std::min(cursor + w, x + width);
      e.words.push_back({word, BBox{cursor, y, right, y + kLineHeight}});
      cursor = std::min(right + std::round(kCharWidth), x + width);
    }
    start = end + 1;
  }
  entities_.push_back(std::move(e));
  if (label == EntityLabel::kQuestion) questions_.push_back(entities_.back().id);
  return entities_.back().id;
}

void Generator::Link(EntityId a, EntityId b) {
  entities_[static_cast<std::size_t>(a)].links.push_back({a, b});
  entities_[static_cast<std::size_t>(b)].links.push_back({a, b});
}

int Generator::Field(double x, double y) {
  double roll = Uniform(0, 1);
  x += Uniform(0, 15);
  if (roll < 0.52) {  // inline
    FieldType type = RandomType();
    EntityId q = Add(EntityLabel::kQuestion, QuestionText(type), x, y);
    EntityId a = Add(EntityLabel::kAnswer, AnswerText(type),
                     Get(q).box.x_max + Uniform(6, 30), y + Uniform(-2, 2));
    Link(q, a);
    return 1;
  }
  if (roll < 0.80) {  // stacked: the answer sits on the next line
    FieldType type = RandomType();
    EntityId q = Add(EntityLabel::kQuestion, QuestionText(type), x, y);
    EntityId a = Add(EntityLabel::kAnswer, AnswerText(type),
                     x + Uniform(-4, 20), y + Uniform(18, 26));
    Link(q, a);
    return 2;
  }
  if (roll < 0.94) {  // a question left blank
    std::string text =
        Chance(0.5) ? Pick(kOrphanQuestions) : QuestionText(RandomType());
    Add(EntityLabel::kQuestion, text, x, y);
    return 1;
  }
  // a stray value nobody asked for
  Add(EntityLabel::kAnswer, AnswerText(RandomType()), x, y);
  return 1;
}

double Generator::Table(double y) {
  const double row_height = 22;
  EntityId amount = Add(EntityLabel::kQuestion, "AMOUNT", 330, y);
  EntityId quantity =
      Chance(0.5) ? Add(EntityLabel::kQuestion, "QUANTITY", 480, y) : -1;
  int rows = Integer(2, 3);
  std::size_t first = Below(std::size(kTableRows));
  for (int r = 0; r < rows; ++r) {
    double row_y = y + row_height * (r + 1);
    EntityId label = Add(
        EntityLabel::kQuestion,
        std::string(kTableRows[(first + static_cast<std::size_t>(r)) %
                               std::size(kTableRows)]),
        40, row_y);
    EntityId cost =
        Add(EntityLabel::kAnswer, AnswerText(FieldType::kAmount), 335, row_y);
    Link(label, cost);
    Link(amount, cost);
    if (quantity >= 0) {
      EntityId qty = Add(EntityLabel::kAnswer,
                         AnswerText(FieldType::kQuantity), 485, row_y);
      Link(label, qty);
      Link(quantity, qty);
    }
  }
  return y + row_height * (rows + 1) + 14;
}

Form Generator::MakeForm(std::string name) {
  entities_.clear();
  questions_.clear();

  std::string title = Pick(kHeaders);
  EntityId header = Add(EntityLabel::kHeader, title,
                        (kPageWidth - kCharWidth * static_cast<double>(title.size())) / 2,
                        40);
  double y = 100;
  bool table_done = false;
  const double line = 26;
  while (y < kPageBottom - 60) {
    if (!table_done && y > 250 && Chance(0.35)) {
      y = Table(y);
      table_done = true;
      continue;
    }
    int used = Field(40, y);
    if (Chance(0.75)) used = std::max(used, Field(400, y));
    y += line * used + Uniform(4, 12);
  }
  if (Chance(0.7)) Add(EntityLabel::kOther, Pick(kOthers), 40, kPageBottom + 20);

  // Headers in FUNSD link to the questions they introduce.
  std::size_t introduced = std::min<std::size_t>(questions_.size(), 2);
  for (std::size_t i = 0; i < introduced; ++i) Link(header, questions_[i]);

  return Form(std::move(name), std::move(entities_));
}

}  // namespace

std::vector<Form> SyntheticForms(std::size_t count, std::uint64_t seed,
                                 const std::string& prefix) {
  Generator gen(seed);
  std::vector<Form> forms;
  forms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char suffix[24];
    std::snprintf(suffix, sizeof suffix, "_%03zu", i);
    forms.push_back(gen.MakeForm(prefix + suffix));
  }
  return forms;
}

SyntheticSplits FixtureSplits() {
  return {SyntheticForms(60, 20221, "train"), SyntheticForms(20, 20222, "test")};
}

void WriteCorpus(const std::filesystem::path& dir,
                 const std::vector<Form>& forms) {
  std::filesystem::create_directories(dir);
  for (const Form& form : forms) {
    std::ofstream out(dir / (form.name() + ".json"), std::ios::binary);
    if (!out) throw IoError("cannot write into " + dir.string());
    out << SerializeForm(form) << '\n';
  }
}

}  // namespace formlink
