#include "unionbench/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "unionbench/errors.hpp"

namespace unionbench {

std::vector<std::string> Table::column(size_t i) const {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& row : rows)
        out.push_back(row[i]);
    return out;
}

std::string_view column_type_name(ColumnType t) {
    switch (t) {
        case ColumnType::Numeric: return "numeric";
        case ColumnType::ShortString: return "short_str";
        case ColumnType::MediumString: return "medium_str";
        case ColumnType::LongString: return "long_str";
    }
    return "?";
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string slugify(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else if (!out.empty() && out.back() != '_') {
            out.push_back('_');
        }
    }
    while (!out.empty() && out.back() == '_')
        out.pop_back();
    return out;
}

size_t word_count(std::string_view s) {
    size_t count = 0;
    bool in_word = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

bool parses_as_number(std::string_view s) {
    std::string t = trim(s);
    // thousands separators are stripped wholesale before the scan
    std::erase(t, ',');
    if (t.empty())
        return false;
    size_t i = 0;
    if (t[i] == '+' || t[i] == '-')
        ++i;
    size_t digits = 0, points = 0;
    for (; i < t.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(t[i]))) {
            ++digits;
        } else if (t[i] == '.') {
            if (++points > 1)
                return false;
        } else {
            return false;
        }
    }
    return digits > 0;
}

ColumnType infer_column_type(std::span<const std::string> values) {
    size_t non_null = 0, numeric = 0, words = 0;
    for (const auto& v : values) {
        if (v.empty())
            continue;
        ++non_null;
        if (parses_as_number(v))
            ++numeric;
        words += word_count(v);
    }
    if (non_null == 0)
        return ColumnType::ShortString;
    if (numeric * 10 >= non_null * 9)  // >= 90%
        return ColumnType::Numeric;
    double mean_words = static_cast<double>(words) / static_cast<double>(non_null);
    if (mean_words < 3.0)
        return ColumnType::ShortString;
    if (mean_words < 6.0)
        return ColumnType::MediumString;
    return ColumnType::LongString;
}

namespace {

std::vector<std::string> split_pipe_line(std::string_view line) {
    // tolerate Markdown-style leading/trailing pipes: "| a | b |"
    std::string_view body = line;
    {
        size_t b = 0, e = body.size();
        while (b < e && std::isspace(static_cast<unsigned char>(body[b])))
            ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(body[e - 1])))
            --e;
        body = body.substr(b, e - b);
    }
    if (!body.empty() && body.front() == '|')
        body.remove_prefix(1);
    if (!body.empty() && body.back() == '|')
        body.remove_suffix(1);

    std::vector<std::string> cells;
    size_t start = 0;
    for (size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == '|') {
            cells.push_back(trim(body.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

bool is_decoration_row(const std::vector<std::string>& cells) {
    if (cells.empty())
        return false;
    for (const auto& c : cells) {
        if (c.empty())
            return false;
        bool has_dash = false;
        for (char ch : c) {
            if (ch == '-')
                has_dash = true;
            else if (ch != ':')
                return false;
        }
        if (!has_dash)
            return false;
    }
    return true;
}

}  // namespace

PipeParseResult parse_pipe_table(std::string_view text) {
    PipeParseResult result;
    Table& t = result.table;

    std::vector<std::string_view> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            lines.push_back(line);
            start = i + 1;
        }
    }

    bool have_header = false;
    size_t line_no = 0;
    for (auto line : lines) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto cells = split_pipe_line(line);
        if (!have_header) {
            for (size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].empty()) {
                    cells[i] = "column_" + std::to_string(i + 1);
                    result.warnings.push_back("empty header name at position " +
                                              std::to_string(i + 1) + " replaced");
                }
            }
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (is_decoration_row(cells))
            continue;
        if (cells.size() < t.header.size()) {
            result.warnings.push_back("row " + std::to_string(line_no) + " padded from " +
                                      std::to_string(cells.size()) + " to " +
                                      std::to_string(t.header.size()) + " cells");
            cells.resize(t.header.size());
        } else if (cells.size() > t.header.size()) {
            result.warnings.push_back("row " + std::to_string(line_no) + " truncated from " +
                                      std::to_string(cells.size()) + " to " +
                                      std::to_string(t.header.size()) + " cells");
            cells.resize(t.header.size());
        }
        t.rows.push_back(std::move(cells));
    }

    if (!have_header)
        throw EmptyInputError("pipe table: no parseable line");
    return result;
}

std::string serialize_pipe_table(const Table& t, size_t row_limit) {
    std::string out;
    for (size_t i = 0; i < t.header.size(); ++i) {
        if (i)
            out += " | ";
        out += t.header[i];
    }
    out += '\n';
    size_t n = std::min(row_limit, t.rows.size());
    for (size_t r = 0; r < n; ++r) {
        for (size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i)
                out += " | ";
            out += t.rows[r][i];
        }
        out += '\n';
    }
    return out;
}

namespace {

bool needs_csv_quoting(std::string_view s) {
    return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_csv_field(std::string& out, std::string_view s) {
    if (!needs_csv_quoting(s)) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
}

void append_csv_record(std::string& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += ',';
        append_csv_field(out, fields[i]);
    }
    out += '\n';
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_open = false;  // true once the current record has content
    size_t i = 0;

    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(record));
        record.clear();
        field_open = false;
    };

    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field += c;
                ++i;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            field_open = true;
            ++i;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_open = true;
            ++i;
        } else if (c == '\r') {
            ++i;
            if (i < text.size() && text[i] == '\n')
                ++i;
            end_record();
        } else if (c == '\n') {
            ++i;
            end_record();
        } else {
            field += c;
            field_open = true;
            ++i;
        }
    }
    if (in_quotes)
        throw MalformedCsvError("unbalanced quotes in CSV input");
    if (field_open || !field.empty() || !record.empty())
        end_record();
    return records;
}

}  // namespace

std::string serialize_csv(const Table& t) {
    std::string out;
    append_csv_record(out, t.header);
    for (const auto& row : t.rows)
        append_csv_record(out, row);
    return out;
}

Table parse_csv(std::string_view text, std::vector<std::string>* warnings) {
    auto records = parse_csv_records(text);
    if (records.empty())
        throw MalformedCsvError("CSV input has no header row");

    Table t;
    t.header = std::move(records.front());
    for (size_t i = 0; i < t.header.size(); ++i) {
        if (trim(t.header[i]).empty()) {
            t.header[i] = "column_" + std::to_string(i + 1);
            if (warnings)
                warnings->push_back("empty header name at position " +
                                    std::to_string(i + 1) + " replaced");
        }
    }
    for (size_t r = 1; r < records.size(); ++r) {
        auto& row = records[r];
        if (row.size() != t.header.size()) {
            if (warnings)
                warnings->push_back("row " + std::to_string(r) + " repaired from " +
                                    std::to_string(row.size()) + " to " +
                                    std::to_string(t.header.size()) + " cells");
            row.resize(t.header.size());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Table t = parse_csv(buf.str());
    t.name = path.stem().string();
    return t;
}

void write_csv_file(const Table& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << serialize_csv(t);
    if (!out)
        throw IoError("write failed for " + path.string());
}

}  // namespace unionbench
