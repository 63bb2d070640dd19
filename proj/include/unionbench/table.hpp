#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unionbench {

// A named grid of string cells with a header row. Cells are plain strings;
// the empty string is the one and only null representation, in memory and
// on disk. Tables are value objects: never mutated after construction, safe
// to share across threads.
struct Table {
    std::string name;    // filename, no path separators
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() cells
    std::string topic;   // empty when unknown

    size_t n_rows() const { return rows.size(); }
    size_t n_cols() const { return header.size(); }
    size_t n_cells() const { return n_rows() * n_cols(); }

    std::vector<std::string> column(size_t i) const;

    bool operator==(const Table& other) const = default;
};

enum class ColumnType { Numeric, ShortString, MediumString, LongString };

std::string_view column_type_name(ColumnType t);

struct PipeParseResult {
    Table table;
    std::vector<std::string> warnings;
};

// Parses the pipe-delimited block format ("A | B\n1 | x"). First non-blank
// line is the header; Markdown separator rows (---|---) are dropped; ragged
// rows are right-padded or truncated to the header width, with one warning
// per repaired row. Throws EmptyInputError if there is no non-blank line.
// A header-only table (zero rows) is valid.
PipeParseResult parse_pipe_table(std::string_view text);

// Pipe rendering used in prompts. row_limit truncates the body; the header
// always appears.
std::string serialize_pipe_table(const Table& t, size_t row_limit = SIZE_MAX);

// RFC-4180-style CSV, '\n' line ends, first row is the header.
// parse_csv(serialize_csv(t)) == t for every valid table.
std::string serialize_csv(const Table& t);
Table parse_csv(std::string_view text, std::vector<std::string>* warnings = nullptr);

Table read_csv_file(const std::filesystem::path& path);
void write_csv_file(const Table& t, const std::filesystem::path& path);

// Numeric iff at least 90% of non-null values parse as decimal numbers
// (optional sign, thousands separators stripped, at most one decimal
// point). Otherwise bucketed by mean words per non-null value w:
// w < 3 short, 3 <= w < 6 medium, w >= 6 long. An all-null column is
// ShortString (w treated as 0).
ColumnType infer_column_type(std::span<const std::string> values);

bool parses_as_number(std::string_view s);
size_t word_count(std::string_view s);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string slugify(std::string_view s);

}  // namespace unionbench
