// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/sym_heap.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace cvf {

SymChunk SymChunk::from(const Chunk& c) {
  return {static_cast<Kind>(static_cast<int>(c.kind)), c.args, c.lem_type};
}

std::optional<Chunk> SymChunk::to_chunk() const {
  if (kind == Kind::PredInstance) return std::nullopt;
  if (!std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); })) return std::nullopt;
  return Chunk{static_cast<ChunkKind>(static_cast<int>(kind)), args, lem_type};
}

std::string SymChunk::str() const {
  if (kind == Kind::PredInstance) return args[0].str() + "()";
  return Chunk{static_cast<ChunkKind>(static_cast<int>(kind)), args, lem_type}.str();
}

std::strong_ordering operator<=>(const SymChunk& a, const SymChunk& b) {
  if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
  if (auto c = a.lem_type.compare(b.lem_type); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

void SymHeap::add(const SymChunk& c, Fraction f) {
  if (f.is_zero()) return;
  cells_[c] += f;
}

void SymHeap::remove(const SymChunk& c, Fraction f) {
  auto it = cells_.find(c);
  if (it == cells_.end()) throw std::logic_error("removing an absent chunk: " + c.str());
  it->second = it->second - f;
  if (it->second.is_zero()) cells_.erase(it);
}

Fraction SymHeap::coefficient(const SymChunk& c) const {
  auto it = cells_.find(c);
  return it == cells_.end() ? Fraction::zero() : it->second;
}

void SymHeap::normalize(const PathCondition& pc) {
  Map out;
  for (const auto& [c, f] : cells_) {
    SymChunk n = c;
    for (auto& t : n.args) t = pc.normalize(t);
    out[n] += f;
  }
  cells_ = std::move(out);
}

Fraction SymHeap::lemma_chunk_total() const {
  Fraction total;
  for (const auto& [c, f] : cells_)
    if (c.kind == SymChunk::Kind::LemType) total += f;
  return total;
}

std::vector<std::string> SymHeap::dump_lines() const {
  std::vector<std::string> lines;
  for (const auto& [c, f] : cells_) lines.push_back(f.str() + " " + c.str());
  return lines;
}

SymHeap sym_heap_add(const SymHeap& a, const SymHeap& b) {
  SymHeap out = a;
  for (const auto& [c, f] : b) out.add(c, f);
  return out;
}

std::vector<std::string> readable_symbols(std::vector<std::string> lines) {
  static const std::regex sym(R"(([A-Za-z_][A-Za-z0-9_]*)#([0-9]+))");
  std::map<std::string, std::set<std::string>> ids;
  for (const auto& line : lines)
    for (auto it = std::sregex_iterator(line.begin(), line.end(), sym); it != std::sregex_iterator(); ++it)
      ids[(*it)[1].str()].insert((*it)[2].str());
  for (auto& line : lines) {
    std::string out;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), sym); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      out.append(line, last, static_cast<std::size_t>(m.position(0)) - last);
      out += ids[m[1].str()].size() == 1 ? m[1].str() : m[0].str();
      last = static_cast<std::size_t>(m.position(0) + m.length(0));
    }
    out.append(line, last, std::string::npos);
    line = std::move(out);
  }
  return lines;
}

}  // namespace cvf
