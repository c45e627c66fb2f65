// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the unit tests and the acceptance runner.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvf/parser.hpp"
#include "cvf/verifier.hpp"

namespace cvf::testing {

inline std::string corpus_path(const std::string& name) { return std::string(CVF_CORPUS_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string corpus_text(const std::string& name) { return slurp(corpus_path(name)); }

inline Program load(const std::string& name) { return parse_program(corpus_text(name)); }

/// Corpus files relative to the corpus root, sorted.
inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  const std::filesystem::path root(CVF_CORPUS_DIR);
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".cvf")
      out.push_back(std::filesystem::relative(e.path(), root).generic_string());
  std::sort(out.begin(), out.end());
  return out;
}

inline const char* const kExample = "faa_two_threads.cvf";
inline const char* const kPlain = "faa_two_threads_plain.cvf";

/// One annotation point of the outer proof outline: the snapshot to look
/// at and the chunks the outline lists there (predicate instances unfolded).
struct OutlinePoint {
  const char* thread;
  const char* point;
  std::vector<std::string> chunks;
};

inline const std::string& lem1_chunk() {
  static const std::string s =
      "1 lem(op) { open_atomic_space((), Inv(x, g1, g2)); op(); *g1 <-g 1; close_atomic_space((), Inv(x, g1, g2)) }"
      " : FAA_ghop(x, 1, pre1(x, g1, g2), post1(x, g1, g2))";
  return s;
}

inline const std::vector<OutlinePoint>& outer_outline() {
  static const std::string as = "atomic_space((), Inv(x, g1, g2))";
  static const std::vector<OutlinePoint> points{
      {"root", "entry", {}},
      {"root", "ghost create_atomic_space", {"1 x |-> 0", "1 g1 |->g 0", "1 g2 |->g 0"}},
      {"root", "par", {"1 " + as, "1/2 g1 |->g 0", "1/2 g2 |->g 0"}},
      {"root.L", "entry", {"1/2 " + as, "1/2 g1 |->g 0"}},
      {"root.L", "faa", {"1/2 " + as, "1/2 g1 |->g 0", lem1_chunk()}},
      {"root.L", "exit", {"1/2 " + as, "1/2 g1 |->g 1", lem1_chunk()}},
      {"root", "join", {"1 " + as, "1/2 g1 |->g 1", "1/2 g2 |->g 1"}},
      {"root", "let v", {"1 x |-> 2", "1 g1 |->g 1", "1 g2 |->g 1"}},
  };
  return points;
}

/// Empty when the snapshot matches `p`; otherwise a description of the
/// difference. Lemma-type chunks are ignored where the outline lists none.
inline std::string compare_outline(const std::vector<Snapshot>& snaps, const OutlinePoint& p) {
  auto it = std::find_if(snaps.begin(), snaps.end(),
                         [&](const Snapshot& s) { return s.thread == p.thread && s.point == p.point; });
  if (it == snaps.end()) return std::string("no snapshot ") + p.thread + " " + p.point;
  bool want_lemmas = std::any_of(p.chunks.begin(), p.chunks.end(),
                                 [](const std::string& c) { return c.find(" : ") != std::string::npos; });
  std::set<std::string> have;
  for (const auto& h : it->heap)
    if (want_lemmas || h.find(" : ") == std::string::npos) have.insert(h);
  std::set<std::string> want(p.chunks.begin(), p.chunks.end());
  if (have == want) return {};
  std::string msg = std::string(p.thread) + " " + p.point + ": have";
  for (const auto& h : have) msg += " [" + h + "]";
  msg += " want";
  for (const auto& w : want) msg += " [" + w + "]";
  return msg;
}

}  // namespace cvf::testing
