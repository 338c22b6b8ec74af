/* Copyright 2026 The kgsub Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "kgsub/checkpoint.h"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "kgsub/error.h"

namespace kgsub {
namespace {

constexpr std::string_view kTextMagic = "kgsub-checkpoint";
constexpr char kBinaryMagic[8] = {'K', 'G', 'S', 'U', 'B', 'B', 'I', 'N'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary checkpoints assume a little-endian host");

// Same order in both formats.
constexpr const char* kMatrixNames[] = {"entity_head",  "entity_tail",
                                        "relation_fwd", "relation_bwd",
                                        "delta_fwd",    "delta_bwd"};

Matrix& matrix_at(EmbeddingModel& m, std::size_t i) {
  Matrix* all[] = {&m.entity_head,  &m.entity_tail, &m.relation_fwd,
                   &m.relation_bwd, &m.delta_fwd,   &m.delta_bwd};
  return *all[i];
}

const Matrix& matrix_at(const EmbeddingModel& m, std::size_t i) {
  return matrix_at(const_cast<EmbeddingModel&>(m), i);
}

// ---------------------------------------------------------------------------
// Text

void write_text(std::ostream& out, const Checkpoint& ckpt) {
  const EmbeddingModel& m = ckpt.model;
  out << kTextMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(m.kind) << '\n';
  out << "phi " << to_string(m.phi) << '\n';
  out << "dim " << m.dim << '\n';
  out << "constrained " << (m.constraints.empty() ? 0 : 1) << '\n';
  out << "entities " << ckpt.vocab.num_entities() << '\n';
  for (const auto& name : ckpt.vocab.entity_names()) out << name << '\n';
  out << "relations " << ckpt.vocab.num_relations() << '\n';
  for (const auto& name : ckpt.vocab.relation_names()) out << name << '\n';
  out << "rules " << ckpt.rules.size() << '\n';
  for (const auto& r : ckpt.rules) {
    out << r.premise << ' '
        << (r.direction == RuleDirection::kDirect ? "direct" : "inverse")
        << ' ' << r.conclusion << '\n';
  }
  for (std::size_t i = 0; i < 6; ++i) {
    const Matrix& mat = matrix_at(m, i);
    out << "matrix " << kMatrixNames[i] << ' ' << mat.rows() << ' '
        << mat.cols() << '\n';
    std::string line;
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      line.clear();
      const auto row = mat.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) line += ' ';
        line += fmt::format("{:.17g}", row[c]);
      }
      out << line << '\n';
    }
  }
  out << "end\n";
}

class TextReader {
 public:
  explicit TextReader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw ParseError("truncated checkpoint", line_);
    ++line_;
    return s;
  }

  // "key value" -> value
  std::string field(std::string_view key) {
    const std::string s = line();
    if (s.size() <= key.size() || s.compare(0, key.size(), key) != 0 ||
        s[key.size()] != ' ') {
      throw ParseError("expected '" + std::string(key) + "'", line_);
    }
    return s.substr(key.size() + 1);
  }

  std::size_t count(std::string_view key) {
    const std::string v = field(key);
    std::size_t n = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size()) {
      throw ParseError("bad count for '" + std::string(key) + "'", line_);
    }
    return n;
  }

  std::size_t line_no() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void parse_row(std::string_view s, std::span<double> row, std::size_t line) {
  const char* p = s.data();
  const char* end = s.data() + s.size();
  for (std::size_t c = 0; c < row.size(); ++c) {
    while (p < end && *p == ' ') ++p;
    const auto [next, ec] = std::from_chars(p, end, row[c]);
    if (ec != std::errc()) throw ParseError("bad matrix value", line);
    p = next;
  }
  if (p != end) throw ParseError("extra values on matrix row", line);
}

Checkpoint read_text(std::istream& in) {
  TextReader r(in);
  {
    const std::string header = r.line();
    if (header != fmt::format("{} {}", kTextMagic, kVersion)) {
      throw ParseError("unsupported checkpoint header", 1);
    }
  }
  Checkpoint ckpt;
  ModelConfig config;
  config.kind = parse_model_kind(r.field("kind"));
  config.phi = parse_nonlinearity(r.field("phi"));
  config.dim = r.count("dim");
  const bool constrained = r.count("constrained") != 0;
  const std::size_t ne = r.count("entities");
  for (std::size_t i = 0; i < ne; ++i) {
    const std::string name = r.line();
    if (ckpt.vocab.intern_entity(name) != static_cast<EntityId>(i)) {
      throw ParseError("duplicate entity name", r.line_no());
    }
  }
  const std::size_t nr = r.count("relations");
  for (std::size_t i = 0; i < nr; ++i) {
    const std::string name = r.line();
    if (ckpt.vocab.intern_relation(name) != static_cast<RelationId>(i)) {
      throw ParseError("duplicate relation name", r.line_no());
    }
  }
  const std::size_t nrules = r.count("rules");
  for (std::size_t i = 0; i < nrules; ++i) {
    std::istringstream ls(r.line());
    SubsumptionRule rule;
    std::string dir;
    if (!(ls >> rule.premise >> dir >> rule.conclusion) ||
        (dir != "direct" && dir != "inverse")) {
      throw ParseError("bad rule line", r.line_no());
    }
    rule.direction =
        dir == "direct" ? RuleDirection::kDirect : RuleDirection::kInverse;
    ckpt.rules.push_back(rule);
  }
  config.num_entities = ne;
  config.num_relations = nr;
  ConstraintGraph graph;
  if (constrained) graph = ConstraintGraph(ckpt.rules, ckpt.vocab.relation_names());
  ckpt.model = make_model(config, std::move(graph));
  for (std::size_t i = 0; i < 6; ++i) {
    Matrix& mat = matrix_at(ckpt.model, i);
    const std::string expect = fmt::format("matrix {} {} {}", kMatrixNames[i],
                                           mat.rows(), mat.cols());
    if (r.line() != expect) {
      throw ParseError("expected '" + expect + "'", r.line_no());
    }
    for (std::size_t row = 0; row < mat.rows(); ++row) {
      parse_row(r.line(), mat.row(row), r.line_no());
    }
  }
  if (r.line() != "end") throw ParseError("missing end marker", r.line_no());
  return ckpt;
}

// ---------------------------------------------------------------------------
// Binary: little-endian, see docs/checkpoint_format.md.

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw ParseError("truncated binary checkpoint");
  }
  return v;
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (1u << 20)) throw ParseError("implausible name length");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw ParseError("truncated binary checkpoint");
  }
  return s;
}

void write_binary(std::ostream& out, const Checkpoint& ckpt) {
  const EmbeddingModel& m = ckpt.model;
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.kind));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.phi));
  put<std::uint32_t>(out, m.constraints.empty() ? 0 : 1);
  put<std::uint64_t>(out, m.dim);
  put<std::uint64_t>(out, ckpt.vocab.num_entities());
  for (const auto& s : ckpt.vocab.entity_names()) put_string(out, s);
  put<std::uint64_t>(out, ckpt.vocab.num_relations());
  for (const auto& s : ckpt.vocab.relation_names()) put_string(out, s);
  put<std::uint64_t>(out, ckpt.rules.size());
  for (const auto& r : ckpt.rules) {
    put<std::int32_t>(out, r.premise);
    put<std::uint8_t>(out, r.direction == RuleDirection::kDirect ? 0 : 1);
    put<std::int32_t>(out, r.conclusion);
  }
  for (std::size_t i = 0; i < 6; ++i) {
    const Matrix& mat = matrix_at(m, i);
    put<std::uint64_t>(out, mat.rows());
    put<std::uint64_t>(out, mat.cols());
    const auto v = mat.values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
}

Checkpoint read_binary(std::istream& in) {
  if (get<std::uint32_t>(in) != kVersion) {
    throw ParseError("unsupported binary checkpoint version");
  }
  Checkpoint ckpt;
  ModelConfig config;
  const auto kind = get<std::uint32_t>(in);
  const auto phi = get<std::uint32_t>(in);
  if (kind > 2 || phi > 3) throw ParseError("bad model kind or nonlinearity");
  config.kind = static_cast<ModelKind>(kind);
  config.phi = static_cast<Nonlinearity>(phi);
  const bool constrained = get<std::uint32_t>(in) != 0;
  config.dim = get<std::uint64_t>(in);
  const auto ne = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < ne; ++i) {
    if (ckpt.vocab.intern_entity(get_string(in)) != static_cast<EntityId>(i)) {
      throw ParseError("duplicate entity name");
    }
  }
  const auto nr = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < nr; ++i) {
    if (ckpt.vocab.intern_relation(get_string(in)) !=
        static_cast<RelationId>(i)) {
      throw ParseError("duplicate relation name");
    }
  }
  const auto nrules = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < nrules; ++i) {
    SubsumptionRule r;
    r.premise = get<std::int32_t>(in);
    r.direction = get<std::uint8_t>(in) == 0 ? RuleDirection::kDirect
                                             : RuleDirection::kInverse;
    r.conclusion = get<std::int32_t>(in);
    ckpt.rules.push_back(r);
  }
  config.num_entities = ne;
  config.num_relations = nr;
  ConstraintGraph graph;
  if (constrained) graph = ConstraintGraph(ckpt.rules, ckpt.vocab.relation_names());
  ckpt.model = make_model(config, std::move(graph));
  for (std::size_t i = 0; i < 6; ++i) {
    Matrix& mat = matrix_at(ckpt.model, i);
    const auto rows = get<std::uint64_t>(in);
    const auto cols = get<std::uint64_t>(in);
    if (rows != mat.rows() || cols != mat.cols()) {
      throw ParseError(std::string("shape mismatch for ") + kMatrixNames[i]);
    }
    auto v = mat.values();
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)))) {
      throw ParseError("truncated binary checkpoint");
    }
  }
  return ckpt;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt,
                      CheckpointFormat format) {
  if (format == CheckpointFormat::kText) {
    write_text(out, ckpt);
  } else {
    write_binary(out, ckpt);
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (in.gcount() == sizeof(magic) &&
      std::memcmp(magic, kBinaryMagic, sizeof(magic)) == 0) {
    return read_binary(in);
  }
  in.clear();
  in.seekg(0);
  return read_text(in);
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt,
                     CheckpointFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_checkpoint(out, ckpt, format);
  if (!out) throw IoError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace kgsub
