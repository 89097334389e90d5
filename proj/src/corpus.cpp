#include "segeval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace segeval {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n\f\v";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

Message parse_message(const json& j, std::size_t line_no, std::size_t msg_idx) {
  auto fail = [&](const std::string& what) -> InputError {
    std::ostringstream os;
    os << "parse error at line " << line_no << ", message " << (msg_idx + 1) << ": " << what;
    return InputError(os.str());
  };
  if (!j.is_object()) throw fail("message is not an object");
  Message m;
  if (!j.contains("speaker") || !j["speaker"].is_string())
    throw fail("missing or non-string \"speaker\"");
  if (!j.contains("text") || !j["text"].is_string())
    throw fail("missing or non-string \"text\"");
  m.speaker = j["speaker"].get<std::string>();
  m.text = j["text"].get<std::string>();
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw fail("\"label\" must be a string");
    m.label = j["label"].get<std::string>();
  }
  if (j.contains("segment_id")) {
    if (!j["segment_id"].is_number_integer()) throw fail("\"segment_id\" must be an integer");
    m.segment_id = j["segment_id"].get<long>();
  }
  if (j.contains("boundary_marker")) {
    if (j["boundary_marker"].is_boolean()) {
      m.boundary_marker = j["boundary_marker"].get<bool>();
    } else if (j["boundary_marker"].is_number_integer()) {
      long v = j["boundary_marker"].get<long>();
      if (v != 0 && v != 1) throw fail("\"boundary_marker\" must be 0/1 or boolean");
      m.boundary_marker = (v == 1);
    } else {
      throw fail("\"boundary_marker\" must be 0/1 or boolean");
    }
  }
  return m;
}

json message_to_json(const Message& m) {
  json j;
  j["speaker"] = m.speaker;
  j["text"] = m.text;
  if (m.label) j["label"] = *m.label;
  if (m.segment_id) j["segment_id"] = *m.segment_id;
  if (m.boundary_marker) j["boundary_marker"] = *m.boundary_marker;
  return j;
}

}  // namespace

BoundarySet validated_boundaries(std::vector<int> indices, int num_messages,
                                 const std::string& context) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    int v = indices[i];
    if (v < 1 || v > num_messages - 1) {
      std::ostringstream os;
      os << context << ": boundary index " << v << " out of range [1, "
         << (num_messages - 1) << "]";
      throw InputError(os.str());
    }
    if (i > 0 && indices[i - 1] == v) {
      std::ostringstream os;
      os << context << ": duplicate boundary index " << v;
      throw InputError(os.str());
    }
  }
  return BoundarySet{std::move(indices)};
}

std::vector<Dialogue> ingest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open corpus file: " + file.string());

  std::vector<Dialogue> out;
  std::vector<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    json j;
    try {
      j = json::parse(stripped);
    } catch (const json::exception& e) {
      std::ostringstream os;
      os << "parse error at line " << line_no << ": " << e.what();
      throw InputError(os.str());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      std::ostringstream os;
      os << "parse error at line " << line_no << ": record must be an object with a string \"id\"";
      throw InputError(os.str());
    }
    if (!j.contains("messages") || !j["messages"].is_array()) {
      std::ostringstream os;
      os << "parse error at line " << line_no << ": record missing \"messages\" array";
      throw InputError(os.str());
    }

    Dialogue d;
    d.id = j["id"].get<std::string>();
    const auto& msgs = j["messages"];
    for (std::size_t k = 0; k < msgs.size(); ++k) {
      Message m = parse_message(msgs[k], line_no, k);
      m.text = trim(m.text);
      if (m.text.empty()) continue;  // filtered; survivors are reindexed by position
      d.messages.push_back(std::move(m));
    }
    if (d.messages.empty())
      throw InputError("dialogue '" + d.id + "' has no messages after filtering (line " +
                       std::to_string(line_no) + ")");
    if (std::find(seen_ids.begin(), seen_ids.end(), d.id) != seen_ids.end())
      throw InputError("duplicate dialogue id '" + d.id + "' (line " + std::to_string(line_no) + ")");
    seen_ids.push_back(d.id);
    out.push_back(std::move(d));
  }
  return out;
}

Dialogue group_speaker_turns(const Dialogue& d) {
  Dialogue out;
  out.id = d.id;
  for (std::size_t i = 0; i < d.messages.size(); ++i) {
    const Message& m = d.messages[i];
    bool starts_turn = out.messages.empty() || out.messages.back().speaker != m.speaker;
    if (starts_turn) {
      out.messages.push_back(m);
      continue;
    }
    Message& turn = out.messages.back();
    turn.text += " " + m.text;
    if (m.segment_id) {
      if (turn.segment_id && *turn.segment_id != *m.segment_id)
        throw InputError("dialogue '" + d.id + "': conflicting segment_id inside merged turn at message " +
                         std::to_string(i + 1));
      turn.segment_id = m.segment_id;
    }
    if (m.label) {
      if (turn.label && *turn.label != *m.label)
        throw InputError("dialogue '" + d.id + "': conflicting label inside merged turn at message " +
                         std::to_string(i + 1));
      turn.label = m.label;
    }
    // A boundary marker on a non-leading message would place a segment start
    // inside the merged turn; there is no faithful representation for that.
    if (m.boundary_marker && *m.boundary_marker)
      throw InputError("dialogue '" + d.id + "': boundary_marker inside merged turn at message " +
                       std::to_string(i + 1));
  }
  return out;
}

Dialogue derive_gold(const Dialogue& input, const CanonRule& rule) {
  Dialogue d = (rule.unit == Unit::SpeakerTurn) ? group_speaker_turns(input) : input;

  auto require = [&](bool present, std::size_t idx, const char* field) {
    if (!present)
      throw InputError("dialogue '" + d.id + "': message " + std::to_string(idx + 1) +
                       " missing " + field + " required by derivation rule");
  };

  std::vector<int> gold;
  const auto& ms = d.messages;
  switch (rule.derivation) {
    case Derivation::SegmentIdChange:
      for (std::size_t i = 0; i < ms.size(); ++i) require(ms[i].segment_id.has_value(), i, "segment_id");
      for (std::size_t i = 0; i + 1 < ms.size(); ++i)
        if (*ms[i].segment_id != *ms[i + 1].segment_id) gold.push_back(static_cast<int>(i + 1));
      break;
    case Derivation::BoundaryMarker:
      for (std::size_t i = 0; i < ms.size(); ++i) require(ms[i].boundary_marker.has_value(), i, "boundary_marker");
      for (std::size_t i = 1; i < ms.size(); ++i)
        if (*ms[i].boundary_marker) gold.push_back(static_cast<int>(i));
      break;
    case Derivation::LabelChange:
      for (std::size_t i = 0; i < ms.size(); ++i) require(ms[i].label.has_value(), i, "label");
      for (std::size_t i = 0; i + 1 < ms.size(); ++i)
        if (*ms[i].label != *ms[i + 1].label) gold.push_back(static_cast<int>(i + 1));
      break;
  }
  d.gold = validated_boundaries(std::move(gold), d.num_messages(), "dialogue '" + d.id + "'");
  return d;
}

std::vector<Span> segments_of(int num_messages, const BoundarySet& b) {
  std::vector<Span> spans;
  int start = 1;
  for (int cut : b.indices) {
    spans.push_back({start, cut});
    start = cut + 1;
  }
  spans.push_back({start, num_messages});
  return spans;
}

std::vector<GoldRecord> read_gold_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open gold file: " + file.string());
  std::vector<GoldRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    json j;
    try {
      j = json::parse(stripped);
    } catch (const json::exception& e) {
      throw InputError("gold file parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("num_messages") || !j["num_messages"].is_number_integer() ||
        !j.contains("gold") || !j["gold"].is_array())
      throw InputError("gold file line " + std::to_string(line_no) +
                       ": expected {id, num_messages, gold:[int]}");
    GoldRecord r;
    r.id = j["id"].get<std::string>();
    r.num_messages = j["num_messages"].get<int>();
    std::vector<int> idx;
    for (const auto& v : j["gold"]) {
      if (!v.is_number_integer())
        throw InputError("gold file line " + std::to_string(line_no) + ": non-integer boundary index");
      idx.push_back(v.get<int>());
    }
    r.gold = validated_boundaries(std::move(idx), r.num_messages, "gold record '" + r.id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

void attach_gold(std::vector<Dialogue>& dialogues, std::span<const GoldRecord> records) {
  for (auto& d : dialogues) {
    const GoldRecord* found = nullptr;
    for (const auto& r : records)
      if (r.id == d.id) {
        found = &r;
        break;
      }
    if (!found) throw InputError("no gold record for dialogue '" + d.id + "'");
    if (found->num_messages != d.num_messages())
      throw InputError("gold record for dialogue '" + d.id + "' expects " +
                       std::to_string(found->num_messages) + " messages, corpus has " +
                       std::to_string(d.num_messages()));
    d.gold = found->gold;
  }
}

void write_canonical_file(const std::filesystem::path& file,
                          std::span<const Dialogue> dialogues,
                          std::span<const std::string> header_lines) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + file.string());
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (const auto& d : dialogues) {
    json j;
    j["id"] = d.id;
    json msgs = json::array();
    for (const auto& m : d.messages) msgs.push_back(message_to_json(m));
    j["messages"] = msgs;
    out << j.dump() << "\n";
  }
}

void write_gold_file(const std::filesystem::path& file,
                     std::span<const Dialogue> dialogues,
                     std::span<const std::string> header_lines) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + file.string());
  for (const auto& h : header_lines) out << "# " << h << "\n";
  for (const auto& d : dialogues) {
    json j;
    j["id"] = d.id;
    j["num_messages"] = d.num_messages();
    j["gold"] = d.gold.indices;
    out << j.dump() << "\n";
  }
}

}  // namespace segeval
