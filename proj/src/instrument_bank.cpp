// Copyright 2026 The hprobe Authors
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

#include "hprobe/instrument_bank.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hprobe/error.hpp"

#ifndef HPROBE_DATA_DIR
#define HPROBE_DATA_DIR "data"
#endif

namespace hprobe {
namespace {

constexpr char kDelimiter = '\t';
constexpr const char* kColumnHeader = "id\tinstrument\tfoundation\tattention\ttext";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, kDelimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == kDelimiter) fields.emplace_back();
  return fields;
}

std::string file_name(Instrument i) {
  switch (i) {
    case Instrument::MFQ_Part1: return "mfq_part1.tsv";
    case Instrument::MFQ_Part2: return "mfq_part2.tsv";
    case Instrument::MFV: return "mfv.tsv";
  }
  return {};
}

std::string id_prefix(Instrument i) {
  switch (i) {
    case Instrument::MFQ_Part1: return "mfq1_";
    case Instrument::MFQ_Part2: return "mfq2_";
    case Instrument::MFV: return "mfv_";
  }
  return {};
}

std::size_t expected_items(Instrument i) { return is_mfq(i) ? 16 : 68; }

std::optional<AttentionRole> parse_attention(std::string_view s) {
  if (s == "none") return AttentionRole::None;
  if (s == "MathCheck") return AttentionRole::MathCheck;
  if (s == "GoodCheck") return AttentionRole::GoodCheck;
  return std::nullopt;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaViolation, where + ": expected integer, got '" + s + "'");
  }
}

struct ParsedFile {
  std::string version;
  InstrumentSpec spec;
};

ParsedFile parse_file(const std::filesystem::path& path, Instrument expected) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());

  ParsedFile out;
  out.spec.instrument = expected;
  std::map<int, std::string> labels;
  bool have_scale = false;
  bool have_instrument = false;
  bool in_records = false;
  std::string line;
  int line_no = 0;
  const std::string where_prefix = path.filename().string() + ":";

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = where_prefix + std::to_string(line_no);
    if (line.empty()) continue;
    auto fields = split_fields(line);

    if (!in_records) {
      if (line == kColumnHeader) {
        in_records = true;
        continue;
      }
      const std::string& key = fields[0];
      if (key == "#bank" && fields.size() == 2) {
        out.version = fields[1];
      } else if (key == "#instrument" && fields.size() == 2) {
        auto parsed = parse_instrument(fields[1]);
        if (!parsed || *parsed != expected) {
          throw Error(ErrorCode::SchemaViolation, where + ": file declares instrument '" +
                                                       fields[1] + "', expected " +
                                                       std::string(to_string(expected)));
        }
        have_instrument = true;
      } else if (key == "#scale" && fields.size() == 3) {
        out.spec.scale.min = parse_int(fields[1], where);
        out.spec.scale.max = parse_int(fields[2], where);
        have_scale = true;
      } else if (key == "#label" && fields.size() == 3) {
        labels[parse_int(fields[1], where)] = fields[2];
      } else if (key == "#preamble" && fields.size() == 2) {
        out.spec.preamble = fields[1];
      } else if (key == "#legend" && fields.size() == 2) {
        out.spec.legend_heading = fields[1];
      } else {
        throw Error(ErrorCode::SchemaViolation, where + ": unrecognised header line");
      }
      continue;
    }

    if (fields.size() != 5) {
      throw Error(ErrorCode::SchemaViolation,
                  where + ": expected 5 fields, found " + std::to_string(fields.size()));
    }
    Item item;
    item.id = fields[0];
    if (item.id.rfind(id_prefix(expected), 0) != 0) {
      throw Error(ErrorCode::SchemaViolation, where + ": id '" + item.id + "' must start with " +
                                                  id_prefix(expected));
    }
    auto instrument = parse_instrument(fields[1]);
    if (!instrument || *instrument != expected) {
      throw Error(ErrorCode::SchemaViolation, where + ": item instrument '" + fields[1] + "'");
    }
    item.instrument = *instrument;
    auto attention = parse_attention(fields[3]);
    if (!attention) {
      throw Error(ErrorCode::SchemaViolation, where + ": unknown attention flag '" + fields[3] + "'");
    }
    item.attention = *attention;
    if (item.attention == AttentionRole::None) {
      auto f = parse_foundation(fields[2]);
      if (!f) throw Error(ErrorCode::SchemaViolation, where + ": unknown foundation '" + fields[2] + "'");
      if (!is_legal(expected, *f)) {
        throw Error(ErrorCode::SchemaViolation, where + ": foundation " + fields[2] +
                                                    " is not legal for " +
                                                    std::string(to_string(expected)));
      }
      item.foundation = f;
    } else {
      if (fields[2] != "-") {
        throw Error(ErrorCode::SchemaViolation, where + ": attention items carry no foundation");
      }
      const bool allowed =
          (item.attention == AttentionRole::MathCheck && expected == Instrument::MFQ_Part1) ||
          (item.attention == AttentionRole::GoodCheck && expected == Instrument::MFQ_Part2);
      if (!allowed) {
        throw Error(ErrorCode::SchemaViolation,
                    where + ": " + fields[3] + " is not allowed in " + std::string(to_string(expected)));
      }
    }
    item.text = fields[4];
    if (item.text.empty()) throw Error(ErrorCode::SchemaViolation, where + ": empty item text");
    out.spec.items.push_back(std::move(item));
  }

  if (out.version.empty()) throw Error(ErrorCode::SchemaViolation, where_prefix + " missing #bank");
  if (!have_instrument) throw Error(ErrorCode::SchemaViolation, where_prefix + " missing #instrument");
  if (!have_scale || out.spec.scale.max <= out.spec.scale.min) {
    throw Error(ErrorCode::SchemaViolation, where_prefix + " missing or empty #scale");
  }
  if (!in_records) throw Error(ErrorCode::SchemaViolation, where_prefix + " missing column header");
  if (out.spec.preamble.empty()) throw Error(ErrorCode::SchemaViolation, where_prefix + " missing #preamble");
  for (int p = out.spec.scale.min; p <= out.spec.scale.max; ++p) {
    auto it = labels.find(p);
    if (it == labels.end()) {
      throw Error(ErrorCode::SchemaViolation, where_prefix + " no #label for scale point " + std::to_string(p));
    }
    out.spec.scale.labels.push_back(it->second);
  }
  if (labels.size() != out.spec.scale.labels.size()) {
    throw Error(ErrorCode::SchemaViolation, where_prefix + " #label outside the scale");
  }
  return out;
}

void check_counts(const InstrumentSpec& spec) {
  const std::string name(spec.name());
  if (spec.items.size() != expected_items(spec.instrument)) {
    throw Error(ErrorCode::CountMismatch, name + " has " + std::to_string(spec.items.size()) +
                                              " items, expected " +
                                              std::to_string(expected_items(spec.instrument)));
  }
  const auto attention = std::count_if(spec.items.begin(), spec.items.end(),
                                       [](const Item& it) { return !it.scored(); });
  const long expected_attention = is_mfq(spec.instrument) ? 1 : 0;
  if (attention != expected_attention) {
    throw Error(ErrorCode::CountMismatch, name + " has " + std::to_string(attention) +
                                              " attention items, expected " +
                                              std::to_string(expected_attention));
  }
}

void check_coverage(const InstrumentSpec& spec) {
  const std::string name(spec.name());
  if (is_mfq(spec.instrument)) {
    for (Foundation f : kMfqFoundations) {
      const auto n = std::count_if(spec.items.begin(), spec.items.end(),
                                   [f](const Item& it) { return it.foundation == f; });
      if (n != 3) {
        throw Error(ErrorCode::FoundationCoverage, name + ": foundation " + std::string(to_string(f)) +
                                                       " owns " + std::to_string(n) +
                                                       " items, expected 3 per part");
      }
    }
  } else {
    for (Foundation f : kMfvFoundations) {
      const bool any = std::any_of(spec.items.begin(), spec.items.end(),
                                   [f](const Item& it) { return it.foundation == f; });
      if (!any) {
        throw Error(ErrorCode::FoundationCoverage,
                    name + ": category " + std::string(to_string(f)) + " has no vignettes");
      }
    }
  }
}

}  // namespace

std::string_view to_string(AttentionRole role) {
  switch (role) {
    case AttentionRole::None: return "none";
    case AttentionRole::MathCheck: return "MathCheck";
    case AttentionRole::GoodCheck: return "GoodCheck";
  }
  return "?";
}

std::optional<std::size_t> InstrumentSpec::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

InstrumentBank::InstrumentBank(std::string version, std::vector<InstrumentSpec> specs)
    : version_(std::move(version)), specs_(std::move(specs)) {
  for (std::size_t s = 0; s < specs_.size(); ++s) {
    for (std::size_t i = 0; i < specs_[s].items.size(); ++i) {
      auto [it, inserted] = index_.emplace(specs_[s].items[i].id, std::make_pair(s, i));
      if (!inserted) throw Error(ErrorCode::SchemaViolation, "duplicate item id " + it->first);
    }
  }
}

const InstrumentSpec& InstrumentBank::spec(Instrument i) const {
  for (const auto& s : specs_) {
    if (s.instrument == i) return s;
  }
  throw Error(ErrorCode::SchemaViolation, "bank has no " + std::string(to_string(i)));
}

const Item* InstrumentBank::find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  return &specs_[it->second.first].items[it->second.second];
}

InstrumentBank load_instruments(const std::filesystem::path& dir) {
  std::vector<InstrumentSpec> specs;
  std::string version;
  for (Instrument i : kInstruments) {
    auto parsed = parse_file(dir / file_name(i), i);
    if (version.empty()) {
      version = parsed.version;
    } else if (parsed.version != version) {
      throw Error(ErrorCode::SchemaViolation, file_name(i) + " declares bank version '" +
                                                  parsed.version + "', expected '" + version + "'");
    }
    specs.push_back(std::move(parsed.spec));
  }
  for (const auto& spec : specs) check_counts(spec);
  for (const auto& spec : specs) check_coverage(spec);
  return InstrumentBank(version, std::move(specs));
}

void save_instruments(const InstrumentBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& spec : bank.specs()) {
    std::ofstream out(dir / file_name(spec.instrument), std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MissingFile, (dir / file_name(spec.instrument)).string());
    out << "#bank\t" << bank.version() << '\n';
    out << "#instrument\t" << spec.name() << '\n';
    out << "#scale\t" << spec.scale.min << '\t' << spec.scale.max << '\n';
    for (int p = spec.scale.min; p <= spec.scale.max; ++p) {
      out << "#label\t" << p << '\t' << spec.scale.labels[static_cast<std::size_t>(p - spec.scale.min)] << '\n';
    }
    out << "#preamble\t" << spec.preamble << '\n';
    if (!spec.legend_heading.empty()) out << "#legend\t" << spec.legend_heading << '\n';
    out << kColumnHeader << '\n';
    for (const auto& item : spec.items) {
      out << item.id << '\t' << spec.name() << '\t'
          << (item.foundation ? to_string(*item.foundation) : std::string_view("-")) << '\t'
          << to_string(item.attention) << '\t' << item.text << '\n';
    }
  }
}

std::filesystem::path bundled_bank_dir() {
  if (const char* env = std::getenv("HPROBE_DATA_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / "bank";
  }
  return std::filesystem::path(HPROBE_DATA_DIR) / "bank";
}

std::vector<Item> foundation_items(const InstrumentSpec& spec, Foundation f) {
  if (!is_legal(spec.instrument, f)) {
    throw Error(ErrorCode::IllegalFoundation, std::string(to_string(f)) + " is not measured by " +
                                                  std::string(spec.name()));
  }
  std::vector<Item> out;
  for (const auto& item : spec.items) {
    if (item.scored() && item.foundation == f) out.push_back(item);
  }
  return out;
}

std::vector<Item> mfq_foundation_items(const InstrumentBank& bank, Foundation f) {
  auto out = foundation_items(bank.spec(Instrument::MFQ_Part1), f);
  auto part2 = foundation_items(bank.spec(Instrument::MFQ_Part2), f);
  out.insert(out.end(), part2.begin(), part2.end());
  return out;
}

}  // namespace hprobe
