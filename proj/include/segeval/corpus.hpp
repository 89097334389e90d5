#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segeval/errors.hpp"

namespace segeval {

// One canonical utterance. Supervision fields are optional per message; which
// family a dataset provides determines the gold-derivation rule it supports.
struct Message {
  std::string speaker;
  std::string text;
  std::optional<std::string> label;
  std::optional<long> segment_id;
  std::optional<bool> boundary_marker;  // true = this message starts a new segment
};

// Between-message boundary positions, 1-based: index i separates message i
// from message i+1, so valid indices are 1..T-1. Always sorted, unique.
struct BoundarySet {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool operator==(const BoundarySet&) const = default;
};

// Sorts the input and rejects duplicates and out-of-range indices;
// `context` names the offending dialogue in error messages.
BoundarySet validated_boundaries(std::vector<int> indices, int num_messages,
                                 const std::string& context);

struct Dialogue {
  std::string id;
  std::vector<Message> messages;
  BoundarySet gold;

  int num_messages() const { return static_cast<int>(messages.size()); }
};

enum class Unit { Utterance, SpeakerTurn };
enum class Derivation { SegmentIdChange, BoundaryMarker, LabelChange };

struct CanonRule {
  Unit unit = Unit::Utterance;
  Derivation derivation = Derivation::SegmentIdChange;
};

// Contiguous message span [first, last], 1-based inclusive.
struct Span {
  int first = 0;
  int last = 0;
  int length() const { return last - first + 1; }
  bool operator==(const Span&) const = default;
};

// Reads a canonical line-delimited dialogue file. One JSON record per line:
//   {"id": "...", "messages": [{"speaker": "...", "text": "...",
//                               "label"?, "segment_id"?, "boundary_marker"?}]}
// Lines starting with '#' and blank lines are skipped. Whitespace-only
// messages are dropped and the rest reindexed; a dialogue left with zero
// messages is an error. Gold sets come back empty (see derive_gold /
// read_gold_file).
std::vector<Dialogue> ingest(const std::filesystem::path& file);

// Merges consecutive messages with the same speaker into one turn (texts
// joined by a single space). Supervision inside a merged turn must be
// consistent: segment_id and label values must agree, and no non-leading
// message may carry boundary_marker=true (that would put a segment boundary
// inside a turn).
Dialogue group_speaker_turns(const Dialogue& d);

// Populates gold per the rule:
//   SegmentIdChange:  G = { i : segment_id(i) != segment_id(i+1) }
//   BoundaryMarker:   G = { i : boundary_marker(i+1) }   (marker of message 1 ignored)
//   LabelChange:      G = { i : label(i) != label(i+1) }
// Unit::SpeakerTurn applies group_speaker_turns first. Every message must
// carry the field the rule requires.
Dialogue derive_gold(const Dialogue& d, const CanonRule& rule);

// Cuts 1..num_messages at the boundary set; spans partition the dialogue.
std::vector<Span> segments_of(int num_messages, const BoundarySet& b);
inline std::vector<Span> segments_of(const Dialogue& d, const BoundarySet& b) {
  return segments_of(d.num_messages(), b);
}

// Gold export records: {"id": ..., "num_messages": ..., "gold": [...]}.
struct GoldRecord {
  std::string id;
  int num_messages = 0;
  BoundarySet gold;
};

std::vector<GoldRecord> read_gold_file(const std::filesystem::path& file);

// Attaches gold sets by id; every dialogue must have exactly one record and
// the recorded num_messages must match.
void attach_gold(std::vector<Dialogue>& dialogues, std::span<const GoldRecord> records);

void write_canonical_file(const std::filesystem::path& file,
                          std::span<const Dialogue> dialogues,
                          std::span<const std::string> header_lines);
void write_gold_file(const std::filesystem::path& file,
                     std::span<const Dialogue> dialogues,
                     std::span<const std::string> header_lines);

}  // namespace segeval
