// Copyright 2026 The TinyIDS Authors. All Rights Reserved.
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

#include "tinyids/capture.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "tinyids/error.hpp"

namespace tinyids {

namespace {

constexpr char kFlagLetters[] = {'S', 'F', 'P', 'R', 'U', '.'};
constexpr TcpFlags::Bit kFlagBits[] = {TcpFlags::kSyn, TcpFlags::kFin,
                                       TcpFlags::kPsh, TcpFlags::kRst,
                                       TcpFlags::kUrg, TcpFlags::kAck};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r' || line[i] == '\n'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r' && line[j] != '\n')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> parse_uint(std::string_view s, int base = 10) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  if (v > std::numeric_limits<T>::max()) return std::nullopt;
  return static_cast<T>(v);
}

bool valid_address(std::string_view addr, IpVersion version) {
  std::string s(addr);
  unsigned char buf[16];
  const int family = version == IpVersion::V4 ? AF_INET : AF_INET6;
  return inet_pton(family, s.c_str(), buf) == 1;
}

std::string proto_token(const Protocol& p) {
  switch (p.kind) {
    case Protocol::Kind::Tcp:
      return "TCP";
    case Protocol::Kind::Udp:
      return "UDP";
    case Protocol::Kind::Icmp:
      return "ICMP";
    case Protocol::Kind::Unknown: {
      char buf[16];
      std::snprintf(buf, sizeof buf, "type(0x%02x)", p.code);
      return buf;
    }
  }
  return "?";
}

std::string seq_token(const CaptureRecord& r) {
  if (!r.seq_start) return {};
  std::string s = "seq:" + std::to_string(*r.seq_start);
  if (r.seq_end) s += ".." + std::to_string(*r.seq_end);
  return s;
}

std::string port_token(const CaptureRecord& r) {
  std::string s;
  if (r.src_port && r.dst_port)
    s = std::to_string(*r.src_port) + " > " + std::to_string(*r.dst_port);
  if (r.proto.kind == Protocol::Kind::Tcp &&
      (!r.anonymized() || !r.tcp_flags.empty()))
    s += "[" + r.tcp_flags.to_string() + "]";
  return s;
}

struct Fail {
  ParseReason reason;
};

// Consumes the tokens after the protocol: optional port pair, optional flag
// bracket, then key:value fields.
class LineParser {
 public:
  explicit LineParser(std::vector<std::string_view> tokens)
      : tokens_(std::move(tokens)) {}

  CaptureRecord run() {
    CaptureRecord r;
    parse_direction(r);
    parse_version(r);
    parse_addresses(r);
    parse_protocol(r);
    parse_ports_and_flags(r);
    parse_fields(r);
    if (!validate(r).empty()) throw Fail{ParseReason::BadNumber};
    return r;
  }

 private:
  std::string_view take() {
    if (pos_ >= tokens_.size()) throw Fail{ParseReason::TruncatedLine};
    return tokens_[pos_++];
  }
  bool more() const { return pos_ < tokens_.size(); }
  std::string_view peek() const { return tokens_[pos_]; }

  void parse_direction(CaptureRecord& r) {
    const auto t = take();
    if (t == "in")
      r.direction = Direction::In;
    else if (t == "out")
      r.direction = Direction::Out;
    else
      throw Fail{ParseReason::BadDirection};
  }

  void parse_version(CaptureRecord& r) {
    const auto t = take();
    if (t == "IPv4")
      r.ip_version = IpVersion::V4;
    else if (t == "IPv6")
      r.ip_version = IpVersion::V6;
    else
      throw Fail{ParseReason::BadEndpoint};
  }

  void parse_addresses(CaptureRecord& r) {
    const auto src = take();
    const auto arrow = take();
    const auto dst = take();
    if (arrow != ">") throw Fail{ParseReason::BadEndpoint};
    if (src == "-" && dst == "-") return;  // anonymized
    if (!valid_address(src, r.ip_version) || !valid_address(dst, r.ip_version))
      throw Fail{ParseReason::BadEndpoint};
    r.src_addr = std::string(src);
    r.dst_addr = std::string(dst);
  }

  void parse_protocol(CaptureRecord& r) {
    const auto t = take();
    if (t == "TCP") {
      r.proto = Protocol::tcp();
    } else if (t == "UDP") {
      r.proto = Protocol::udp();
    } else if (t == "ICMP") {
      r.proto = Protocol::icmp();
    } else if (t.starts_with("type(0x") && t.ends_with(")")) {
      const auto hex = t.substr(7, t.size() - 8);
      if (hex.empty() || hex.size() > 2) throw Fail{ParseReason::BadNumber};
      const auto code = parse_uint<std::uint8_t>(hex, 16);
      if (!code) throw Fail{ParseReason::BadNumber};
      r.proto = Protocol::unknown(*code);
    } else {
      throw Fail{ParseReason::BadEndpoint};
    }
  }

  void parse_flags_bracket(CaptureRecord& r, std::string_view bracket) {
    if (r.proto.kind != Protocol::Kind::Tcp) throw Fail{ParseReason::BadFlags};
    if (bracket.size() < 2 || bracket.front() != '[' || bracket.back() != ']')
      throw Fail{ParseReason::BadFlags};
    const auto flags = TcpFlags::parse(bracket.substr(1, bracket.size() - 2));
    if (!flags) throw Fail{ParseReason::BadFlags};
    r.tcp_flags = *flags;
  }

  void parse_ports_and_flags(CaptureRecord& r) {
    if (!r.proto.has_ports()) return;
    if (r.anonymized()) {
      if (more() && peek().starts_with("[")) parse_flags_bracket(r, take());
      return;
    }
    const auto sport = take();
    const auto arrow = take();
    auto dport = take();
    if (arrow != ">") throw Fail{ParseReason::BadEndpoint};
    std::string_view bracket;
    if (const auto b = dport.find('['); b != std::string_view::npos) {
      bracket = dport.substr(b);
      dport = dport.substr(0, b);
    } else if (more() && peek().starts_with("[")) {
      bracket = take();
    }
    r.src_port = parse_uint<std::uint16_t>(sport);
    r.dst_port = parse_uint<std::uint16_t>(dport);
    if (!r.src_port || !r.dst_port) throw Fail{ParseReason::BadNumber};
    if (!bracket.empty()) parse_flags_bracket(r, bracket);
  }

  void parse_fields(CaptureRecord& r) {
    while (more()) {
      const auto t = take();
      if (t.starts_with("seq:")) {
        if (r.seq_start) throw Fail{ParseReason::BadNumber};
        const auto v = t.substr(4);
        if (const auto dots = v.find(".."); dots != std::string_view::npos) {
          r.seq_start = parse_uint<std::uint32_t>(v.substr(0, dots));
          r.seq_end = parse_uint<std::uint32_t>(v.substr(dots + 2));
          if (!r.seq_start || !r.seq_end) throw Fail{ParseReason::BadNumber};
        } else {
          r.seq_start = parse_uint<std::uint32_t>(v);
          if (!r.seq_start) throw Fail{ParseReason::BadNumber};
        }
      } else if (t.starts_with("ack:")) {
        if (r.ack) throw Fail{ParseReason::BadNumber};
        r.ack = parse_uint<std::uint32_t>(t.substr(4));
        if (!r.ack) throw Fail{ParseReason::BadNumber};
      } else if (t.starts_with("win:")) {
        if (r.win) throw Fail{ParseReason::BadNumber};
        r.win = parse_uint<std::uint16_t>(t.substr(4));
        if (!r.win) throw Fail{ParseReason::BadNumber};
      } else if (t.starts_with("len=") || t.starts_with("len:")) {
        if (r.len) throw Fail{ParseReason::BadNumber};
        r.len = parse_uint<std::uint32_t>(t.substr(4));
        if (!r.len) throw Fail{ParseReason::BadNumber};
      } else {
        throw Fail{ParseReason::BadNumber};
      }
    }
  }

  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_csv(std::string_view row) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(row.substr(start));
      return cells;
    }
    cells.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string TcpFlags::to_string() const {
  if (empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < std::size(kFlagLetters); ++i)
    if (has(kFlagBits[i])) s += kFlagLetters[i];
  return s;
}

std::optional<TcpFlags> TcpFlags::parse(std::string_view text) {
  if (text == "none" || text.empty()) return TcpFlags{};
  std::uint8_t bits = 0;
  for (const char c : text) {
    std::size_t i = 0;
    while (i < std::size(kFlagLetters) && kFlagLetters[i] != c) ++i;
    if (i == std::size(kFlagLetters)) return std::nullopt;
    if (bits & kFlagBits[i]) return std::nullopt;
    bits |= kFlagBits[i];
  }
  return TcpFlags(bits);
}

const char* to_string(ParseReason reason) {
  switch (reason) {
    case ParseReason::BadDirection:
      return "BadDirection";
    case ParseReason::BadEndpoint:
      return "BadEndpoint";
    case ParseReason::BadFlags:
      return "BadFlags";
    case ParseReason::BadNumber:
      return "BadNumber";
    case ParseReason::TruncatedLine:
      return "TruncatedLine";
  }
  return "?";
}

std::string validate(const CaptureRecord& r) {
  if (r.src_addr.empty() != r.dst_addr.empty())
    return "only one endpoint address is set";
  if (!r.anonymized() && (!valid_address(r.src_addr, r.ip_version) ||
                          !valid_address(r.dst_addr, r.ip_version)))
    return "address does not match IP version";
  if (r.src_port.has_value() != r.dst_port.has_value())
    return "port pair incomplete";
  if (r.src_port && !r.proto.has_ports())
    return "ports on a protocol without ports";
  if (!r.anonymized() && r.proto.has_ports() && !r.src_port)
    return "TCP/UDP record without ports";
  if (r.anonymized() && r.src_port) return "anonymized record keeps ports";
  if (!r.tcp_flags.empty() && r.proto.kind != Protocol::Kind::Tcp)
    return "TCP flags on a non-TCP record";
  if (r.seq_end && !r.seq_start) return "seq end without seq start";
  if (r.seq_end && r.len &&
      static_cast<std::uint32_t>(*r.seq_end - *r.seq_start) != *r.len)
    return "seq range disagrees with len";
  return {};
}

ParseResult parse_line(std::string_view line) {
  try {
    return LineParser(split_ws(line)).run();
  } catch (const Fail& f) {
    return ParseIssue{1, std::string(line), f.reason};
  }
}

ParsedLog parse_log(std::istream& in) {
  ParsedLog out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (split_ws(line).empty()) continue;
    auto result = parse_line(line);
    if (auto* rec = std::get_if<CaptureRecord>(&result)) {
      out.records.push_back(std::move(*rec));
    } else {
      auto issue = std::get<ParseIssue>(std::move(result));
      issue.line_no = line_no;
      out.issues.push_back(std::move(issue));
    }
  }
  return out;
}

std::string serialize_line(const CaptureRecord& r) {
  std::string s = r.direction == Direction::In ? "in" : "out";
  s += r.ip_version == IpVersion::V4 ? " IPv4 " : " IPv6 ";
  if (r.anonymized())
    s += "- > -";
  else
    s += r.src_addr + " > " + r.dst_addr;
  s += " " + proto_token(r.proto);
  if (const auto ports = port_token(r); !ports.empty()) s += " " + ports;
  if (r.seq_start) s += " " + seq_token(r);
  if (r.ack) s += " ack:" + std::to_string(*r.ack);
  if (r.win) s += " win:" + std::to_string(*r.win);
  if (r.len) s += " len=" + std::to_string(*r.len);
  return s;
}

std::string to_csv_row(const CaptureRecord& r) {
  std::string s = r.direction == Direction::In ? "in," : "out,";
  s += r.ip_version == IpVersion::V4 ? "IPv4," : "IPv6,";
  if (!r.anonymized()) s += r.src_addr + " > " + r.dst_addr;
  s += "," + proto_token(r.proto) + ",";
  s += port_token(r) + ",";
  s += seq_token(r) + ",";
  if (r.ack) s += "ack:" + std::to_string(*r.ack);
  s += ",";
  if (r.win) s += "win:" + std::to_string(*r.win);
  s += ",";
  if (r.len) s += "len=" + std::to_string(*r.len);
  s += ",";
  switch (r.label) {
    case Label::Legit:
      s += "LEGIT";
      break;
    case Label::Anomalous:
      s += "ANOMALOUS";
      break;
    case Label::Unlabeled:
      break;
  }
  return s;
}

CaptureRecord from_csv_row(std::string_view row) {
  row = strip_cr(row);
  const auto cells = split_csv(row);
  if (cells.size() != 10)
    throw Error(Errc::MalformedRow, "expected 10 cells, got " +
                                        std::to_string(cells.size()));
  const auto expect_prefix = [](std::string_view cell, std::string_view prefix,
                                const char* column) {
    if (!cell.empty() && !cell.starts_with(prefix))
      throw Error(Errc::MalformedRow,
                  std::string("bad ") + column + " cell '" + std::string(cell) + "'");
  };
  expect_prefix(cells[5], "seq:", "SEQ");
  expect_prefix(cells[6], "ack:", "ACK");
  expect_prefix(cells[7], "win:", "WIN");
  expect_prefix(cells[8], "len=", "LEN");

  // Reassemble the netdump form and reuse the line grammar.
  std::string line;
  line += cells[0];
  line += ' ';
  line += cells[1];
  line += ' ';
  line += cells[2].empty() ? std::string_view("- > -") : cells[2];
  line += ' ';
  line += cells[3];
  for (std::size_t i = 4; i < 9; ++i) {
    if (cells[i].empty()) continue;
    line += ' ';
    line += cells[i];
  }
  auto parsed = parse_line(line);
  if (const auto* issue = std::get_if<ParseIssue>(&parsed))
    throw Error(Errc::MalformedRow,
                std::string("row rejected (") + to_string(issue->reason) +
                    "): " + std::string(row));
  auto rec = std::get<CaptureRecord>(std::move(parsed));
  const auto target = cells[9];
  if (target == "LEGIT")
    rec.label = Label::Legit;
  else if (target == "ANOMALOUS")
    rec.label = Label::Anomalous;
  else if (target.empty())
    rec.label = Label::Unlabeled;
  else
    throw Error(Errc::MalformedRow,
                "bad target cell '" + std::string(target) + "'");
  return rec;
}

void write_csv(const std::vector<CaptureRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

std::vector<CaptureRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kCsvHeader)
    throw Error(Errc::MalformedHeader, "dataset CSV header must be '" +
                                           std::string(kCsvHeader) + "'");
  std::vector<CaptureRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip_cr(line).empty()) continue;
    try {
      out.push_back(from_csv_row(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_csv(const std::vector<CaptureRecord>& records,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  write_csv(records, out);
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

std::vector<CaptureRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_csv(in);
}

std::filesystem::path ticks_path_for(const std::filesystem::path& dataset) {
  return dataset.string() + ".ticks";
}

void write_ticks(const std::vector<CaptureRecord>& records,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  for (const auto& r : records) {
    if (r.tick_ms) out << *r.tick_ms;
    out << '\n';
  }
}

void read_ticks(std::vector<CaptureRecord>& records,
                const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (i >= records.size())
      throw Error(Errc::LengthMismatch, "ticks file has more lines than records");
    const auto text = strip_cr(line);
    if (text.empty()) {
      records[i].tick_ms.reset();
    } else {
      const auto v = parse_uint<std::uint64_t>(text);
      if (!v)
        throw Error(Errc::MalformedRow,
                    "bad tick on line " + std::to_string(i + 1));
      records[i].tick_ms = *v;
    }
    ++i;
  }
  if (i != records.size())
    throw Error(Errc::LengthMismatch, "ticks file has " + std::to_string(i) +
                                          " lines for " +
                                          std::to_string(records.size()) +
                                          " records");
}

}  // namespace tinyids
