#include "mrfcp/ingestion.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mrfcp/errors.hpp"

namespace mrfcp {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(trim(cell));
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank(const std::string& line) { return trim(line).empty(); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace

void RawVotes::validate() const {
  if (seats == 0) throw DataError("vote table has no seats");
  if (cells.size() % seats != 0) throw DataError("vote table is not rectangular");
  if (seat_labels.size() != seats) throw DataError("seat label count does not match the table");
  if (!dates.empty() && dates.size() != rows()) throw DataError("date label count does not match the table");
  if (!party.empty() && party.size() != cells.size()) throw DataError("party table does not match the vote table");
}

RawVotes parse_votes_csv(std::istream& in, const VoteCsvOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) break;
  }
  if (blank(line)) throw DataError("vote file is empty");
  std::vector<std::string> header = split_csv_line(line);
  const bool dated = !header.empty() && (lower(header[0]) == "date" || lower(header[0]) == "time");
  RawVotes raw;
  raw.seat_labels.assign(header.begin() + (dated ? 1 : 0), header.end());
  raw.seats = raw.seat_labels.size();
  if (raw.seats == 0) throw DataError("vote file header lists no seats");

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    }
    if (dated) raw.dates.push_back(cells[0]);
    for (std::size_t i = dated ? 1 : 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      if (c == "1") {
        raw.cells.push_back(Vote::yes);
      } else if (c == "0") {
        raw.cells.push_back(Vote::no);
      } else if (c == options.missing_marker) {
        raw.cells.push_back(Vote::missing);
      } else {
        throw DataError("line " + std::to_string(line_no) + ": unrecognized vote '" + c + "'");
      }
    }
  }
  if (raw.cells.empty()) throw DataError("vote file has no data rows");
  raw.validate();
  return raw;
}

RawVotes read_votes_csv(const std::string& path, const VoteCsvOptions& options) {
  std::ifstream in = open_input(path);
  return parse_votes_csv(in, options);
}

std::vector<PartySpan> parse_party_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<PartySpan> spans;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (f.size() != 4 || lower(f[0]) != "seat" || lower(f[1]) != "start" || lower(f[2]) != "end" ||
          lower(f[3]) != "party") {
        throw DataError("party file header must be seat,start,end,party");
      }
      continue;
    }
    if (f.size() != 4) throw DataError("line " + std::to_string(line_no) + ": expected 4 fields");
    if (f[2] < f[1]) throw DataError("line " + std::to_string(line_no) + ": span ends before it starts");
    spans.push_back({f[0], f[1], f[2], f[3]});
  }
  if (!header_seen) throw DataError("party file is empty");
  return spans;
}

std::vector<PartySpan> read_party_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_party_csv(in);
}

void attach_parties(RawVotes& votes, const std::vector<PartySpan>& spans) {
  votes.validate();
  if (votes.dates.empty()) throw DataError("party assignment needs dated rows");
  std::vector<std::string> party(votes.cells.size());
  for (std::size_t s = 0; s < votes.seats; ++s) {
    std::vector<const PartySpan*> mine;
    for (const PartySpan& span : spans) {
      if (span.seat == votes.seat_labels[s]) mine.push_back(&span);
    }
    for (std::size_t r = 0; r < votes.rows(); ++r) {
      const std::string& date = votes.dates[r];
      const auto hit = std::find_if(mine.begin(), mine.end(), [&](const PartySpan* sp) {
        return sp->start <= date && date <= sp->end;
      });
      if (hit == mine.end()) {
        throw DataError("no party span covers seat " + votes.seat_labels[s] + " on " + date);
      }
      party[r * votes.seats + s] = (*hit)->party;
    }
  }
  votes.party = std::move(party);
}

RawVotes conformity_filter(const RawVotes& raw, double max_conformity) {
  raw.validate();
  if (!(max_conformity > 0.5) || max_conformity > 1.0) {
    throw InvalidArgument("conformity threshold must lie in (0.5, 1]");
  }
  RawVotes out;
  out.seats = raw.seats;
  out.seat_labels = raw.seat_labels;
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    std::size_t yes = 0;
    std::size_t no = 0;
    for (std::size_t s = 0; s < raw.seats; ++s) {
      if (raw(r, s) == Vote::yes) ++yes;
      if (raw(r, s) == Vote::no) ++no;
    }
    if (yes + no == 0) continue;
    const double majority = static_cast<double>(std::max(yes, no)) / static_cast<double>(yes + no);
    if (majority >= max_conformity) continue;
    out.cells.insert(out.cells.end(), raw.cells.begin() + static_cast<std::ptrdiff_t>(r * raw.seats),
                     raw.cells.begin() + static_cast<std::ptrdiff_t>((r + 1) * raw.seats));
    if (!raw.dates.empty()) out.dates.push_back(raw.dates[r]);
    if (raw.has_party()) {
      out.party.insert(out.party.end(), raw.party.begin() + static_cast<std::ptrdiff_t>(r * raw.seats),
                       raw.party.begin() + static_cast<std::ptrdiff_t>((r + 1) * raw.seats));
    }
  }
  if (out.cells.empty()) throw DataError("conformity filter removed every row");
  return out;
}

ImputeStrategy parse_impute_strategy(const std::string& name) {
  if (name == "own-party-majority") return ImputeStrategy::own_party_majority;
  if (name == "winning-majority") return ImputeStrategy::winning_majority;
  if (name == "opposite-party-majority") return ImputeStrategy::opposite_party_majority;
  throw InvalidArgument("unknown imputation strategy '" + name + "'");
}

std::string to_string(ImputeStrategy strategy) {
  switch (strategy) {
    case ImputeStrategy::own_party_majority: return "own-party-majority";
    case ImputeStrategy::winning_majority: return "winning-majority";
    case ImputeStrategy::opposite_party_majority: return "opposite-party-majority";
  }
  return "unknown";
}

Dataset impute(const RawVotes& raw, const ImputeOptions& options) {
  raw.validate();
  if (options.tie == Vote::missing) throw InvalidArgument("tie value must be yes or no");
  const bool needs_party = options.strategy != ImputeStrategy::winning_majority;
  bool any_missing = false;
  for (Vote v : raw.cells) any_missing = any_missing || v == Vote::missing;
  if (needs_party && any_missing && !raw.has_party()) {
    throw InvalidArgument("strategy " + to_string(options.strategy) + " needs party labels");
  }

  auto row_name = [&](std::size_t r) {
    return "row " + std::to_string(r + 1) + (raw.dates.empty() ? "" : " (" + raw.dates[r] + ")");
  };
  std::vector<Symbol> values(raw.cells.size());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t s = 0; s < raw.seats; ++s) {
      const Vote v = raw(r, s);
      if (v != Vote::missing) {
        values[r * raw.seats + s] = v == Vote::yes ? 1 : 0;
        continue;
      }
      std::size_t yes = 0;
      std::size_t no = 0;
      for (std::size_t o = 0; o < raw.seats; ++o) {
        const Vote w = raw(r, o);
        if (w == Vote::missing) continue;
        bool counts = true;
        if (options.strategy == ImputeStrategy::own_party_majority) {
          counts = raw.party_of(r, o) == raw.party_of(r, s);
        } else if (options.strategy == ImputeStrategy::opposite_party_majority) {
          counts = raw.party_of(r, o) != raw.party_of(r, s);
        }
        if (!counts) continue;
        if (w == Vote::yes) ++yes;
        if (w == Vote::no) ++no;
      }
      if (yes + no == 0) {
        throw DataError(row_name(r) + ": reference group of seat " + raw.seat_labels[s] +
                        " has no recorded vote");
      }
      const Vote pick = yes > no ? Vote::yes : no > yes ? Vote::no : options.tie;
      values[r * raw.seats + s] = pick == Vote::yes ? 1 : 0;
    }
  }
  return Dataset(raw.seats, std::move(values), 2, raw.seat_labels, raw.dates);
}

}  // namespace mrfcp
