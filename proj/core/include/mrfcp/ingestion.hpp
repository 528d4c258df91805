#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "mrfcp/model.hpp"

namespace mrfcp {

enum class Vote : std::uint8_t { no = 0, yes = 1, missing = 2 };

/// Roll-call style records: rows are events in time order, columns are seats.
struct RawVotes {
  std::size_t seats = 0;
  std::vector<Vote> cells;               ///< Row-major rows x seats.
  std::vector<std::string> dates;        ///< One label per row; may be empty.
  std::vector<std::string> seat_labels;  ///< One label per seat.
  /// party[row * seats + seat]; empty when no party information was loaded.
  std::vector<std::string> party;

  std::size_t rows() const noexcept { return seats == 0 ? 0 : cells.size() / seats; }
  Vote operator()(std::size_t row, std::size_t seat) const noexcept { return cells[row * seats + seat]; }
  bool has_party() const noexcept { return !party.empty(); }
  const std::string& party_of(std::size_t row, std::size_t seat) const { return party.at(row * seats + seat); }

  /// Throws DataError when the fields disagree in size.
  void validate() const;
};

struct VoteCsvOptions {
  std::string missing_marker = "NA";
};

/// Parses a header row of seat labels and one row per event with cells in
/// {1, 0, missing_marker}. A first column named "date" or "time" holds row
/// labels. Throws DataError with the line number on malformed input.
RawVotes parse_votes_csv(std::istream& in, const VoteCsvOptions& options = {});
RawVotes read_votes_csv(const std::string& path, const VoteCsvOptions& options = {});

/// One seat occupancy: `party` holds `seat` for dates in [start, end]
/// (ISO dates compare as strings).
struct PartySpan {
  std::string seat;
  std::string start;
  std::string end;
  std::string party;
};

/// Reads a CSV with header seat,start,end,party.
std::vector<PartySpan> parse_party_csv(std::istream& in);
std::vector<PartySpan> read_party_csv(const std::string& path);

/// Fills RawVotes::party from the spans by matching seat label and row date.
/// Throws DataError when a cell has no covering span or the rows lack dates.
void attach_parties(RawVotes& votes, const std::vector<PartySpan>& spans);

/// Keeps rows whose majority side (among non-missing votes) is below
/// max_conformity. Rows with no recorded vote are dropped as well.
/// Throws DataError if no row survives.
RawVotes conformity_filter(const RawVotes& raw, double max_conformity);

enum class ImputeStrategy { own_party_majority, winning_majority, opposite_party_majority };

ImputeStrategy parse_impute_strategy(const std::string& name);
std::string to_string(ImputeStrategy strategy);

struct ImputeOptions {
  ImputeStrategy strategy = ImputeStrategy::own_party_majority;
  /// Value taken when the reference group splits evenly.
  Vote tie = Vote::yes;
};

/// Replaces each missing cell with the majority of the strategy's reference
/// group on the same row and encodes yes as 1, no as 0. The opposite party of a
/// member is every seat on that row held by a different party. Throws
/// DataError naming the row when the reference group cast no vote.
Dataset impute(const RawVotes& raw, const ImputeOptions& options = {});

}  // namespace mrfcp
