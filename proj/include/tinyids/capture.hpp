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

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tinyids {

enum class Direction : std::uint8_t { In, Out };
enum class IpVersion : std::uint8_t { V4, V6 };
enum class Label : std::uint8_t { Legit, Anomalous, Unlabeled };

struct Protocol {
  enum class Kind : std::uint8_t { Tcp, Udp, Icmp, Unknown };

  Kind kind = Kind::Tcp;
  std::uint8_t code = 0;  // raw type code, meaningful for Unknown only

  static constexpr Protocol tcp() { return {Kind::Tcp, 0}; }
  static constexpr Protocol udp() { return {Kind::Udp, 0}; }
  static constexpr Protocol icmp() { return {Kind::Icmp, 0}; }
  static constexpr Protocol unknown(std::uint8_t c) { return {Kind::Unknown, c}; }

  bool has_ports() const { return kind == Kind::Tcp || kind == Kind::Udp; }

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

// Bit set over the tcpdump flag letters. "." is ACK.
class TcpFlags {
 public:
  enum Bit : std::uint8_t {
    kSyn = 1 << 0,
    kAck = 1 << 1,
    kPsh = 1 << 2,
    kFin = 1 << 3,
    kRst = 1 << 4,
    kUrg = 1 << 5,
  };

  constexpr TcpFlags() = default;
  constexpr explicit TcpFlags(std::uint8_t bits) : bits_(bits) {}

  constexpr bool has(Bit b) const { return (bits_ & b) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr TcpFlags with(Bit b) const { return TcpFlags(bits_ | b); }

  // Canonical text, e.g. "S", "P.", "." or "none" for the empty set.
  std::string to_string() const;
  // Parses the text between the brackets. Rejects unknown or repeated letters.
  static std::optional<TcpFlags> parse(std::string_view text);

  friend bool operator==(const TcpFlags&, const TcpFlags&) = default;

 private:
  std::uint8_t bits_ = 0;
};

// One packet as reported by a netdump-style logger on the device.
//
// Records whose addresses are both empty are "anonymized": ports are dropped,
// everything else is retained.
struct CaptureRecord {
  Direction direction = Direction::In;
  IpVersion ip_version = IpVersion::V4;
  std::string src_addr;
  std::string dst_addr;
  Protocol proto;
  std::optional<std::uint16_t> src_port;
  std::optional<std::uint16_t> dst_port;
  TcpFlags tcp_flags;
  std::optional<std::uint32_t> seq_start;
  std::optional<std::uint32_t> seq_end;
  std::optional<std::uint32_t> ack;
  std::optional<std::uint16_t> win;
  std::optional<std::uint32_t> len;
  Label label = Label::Unlabeled;
  // Arrival clock. Never part of the netdump line or the dataset CSV.
  std::optional<std::uint64_t> tick_ms;

  bool anonymized() const { return src_addr.empty() && dst_addr.empty(); }

  friend bool operator==(const CaptureRecord&, const CaptureRecord&) = default;
};

// Returns an empty string when the record satisfies every structural
// invariant, otherwise a description of the first violation.
std::string validate(const CaptureRecord& record);

enum class ParseReason : std::uint8_t {
  BadDirection,
  BadEndpoint,
  BadFlags,
  BadNumber,
  TruncatedLine,
};

const char* to_string(ParseReason reason);

struct ParseIssue {
  std::size_t line_no = 1;
  std::string raw;
  ParseReason reason = ParseReason::TruncatedLine;

  friend bool operator==(const ParseIssue&, const ParseIssue&) = default;
};

using ParseResult = std::variant<CaptureRecord, ParseIssue>;

// Parses one netdump line. Never throws; failures come back as ParseIssue
// with line_no 1 (parse_log renumbers).
ParseResult parse_line(std::string_view line);

struct ParsedLog {
  std::vector<CaptureRecord> records;
  std::vector<ParseIssue> issues;
};

// Blank lines are skipped; line numbers count every physical line.
ParsedLog parse_log(std::istream& in);

std::string serialize_line(const CaptureRecord& record);

inline constexpr std::string_view kCsvHeader =
    "DIRECTION,IPV,IP,TYPE,PORT,SEQ,ACK,WIN,LEN,target";

std::string to_csv_row(const CaptureRecord& record);
// Throws Error{MalformedRow} naming the offending cell.
CaptureRecord from_csv_row(std::string_view row);

void write_csv(const std::vector<CaptureRecord>& records, std::ostream& out);
std::vector<CaptureRecord> read_csv(std::istream& in);
void write_csv(const std::vector<CaptureRecord>& records,
               const std::filesystem::path& path);
std::vector<CaptureRecord> read_csv(const std::filesystem::path& path);

// "<dataset>.ticks" sidecar: one decimal tick per record, empty line if absent.
std::filesystem::path ticks_path_for(const std::filesystem::path& dataset);
void write_ticks(const std::vector<CaptureRecord>& records,
                 const std::filesystem::path& path);
// Fills tick_ms in place. Throws LengthMismatch if line count differs.
void read_ticks(std::vector<CaptureRecord>& records,
                const std::filesystem::path& path);

}  // namespace tinyids
