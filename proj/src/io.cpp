#include "sizeclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "sizeclust/errors.hpp"

namespace sizeclust {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

int parse_code(const std::string& cell, long line, long column) {
    int v = 0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc{} || ptr != end)
        throw DataError("survey: expected an integer code, got '" + cell + "'", line, column);
    return v;
}

}  // namespace

SurveyData read_survey_csv(std::istream& in) {
    SurveyData data;
    std::vector<int> levels;
    std::string line;
    long line_no = 0;
    bool have_header = false;
    bool first_data = true;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cells = split(t);
        if (!have_header) {
            if (cells.size() < 2) throw DataError("survey: header needs an id column and at least one question", line_no);
            data.question_ids.assign(cells.begin() + 1, cells.end());
            data.questions = static_cast<int>(data.question_ids.size());
            have_header = true;
            continue;
        }
        if (cells.size() != static_cast<std::size_t>(data.questions) + 1)
            throw DataError("survey: expected " + std::to_string(data.questions + 1) + " fields, found " +
                                std::to_string(cells.size()),
                            line_no);
        if (first_data && cells.front() == "levels") {
            for (std::size_t c = 1; c < cells.size(); ++c)
                levels.push_back(parse_code(cells[c], line_no, static_cast<long>(c + 1)));
            first_data = false;
            continue;
        }
        first_data = false;
        data.respondent_ids.push_back(cells.front());
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const int v = parse_code(cells[c], line_no, static_cast<long>(c + 1));
            if (v < 1) throw DataError("survey: response codes start at 1", line_no, static_cast<long>(c + 1));
            if (!levels.empty() && v > levels[c - 1])
                throw DataError("survey: response " + std::to_string(v) + " exceeds declared levels " +
                                    std::to_string(levels[c - 1]),
                                line_no, static_cast<long>(c + 1));
            data.responses.push_back(v);
        }
    }
    if (!have_header) throw DataError("survey: empty input");
    data.respondents = static_cast<int>(data.respondent_ids.size());
    if (data.respondents == 0) throw DataError("survey: no respondent rows");
    if (levels.empty()) {
        levels.assign(static_cast<std::size_t>(data.questions), 2);
        for (int n = 0; n < data.respondents; ++n)
            for (int q = 0; q < data.questions; ++q)
                levels[static_cast<std::size_t>(q)] = std::max(levels[static_cast<std::size_t>(q)], data.at(n, q));
    }
    data.levels = std::move(levels);
    data.validate();
    return data;
}

SurveyData read_survey_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open survey file " + path.string());
    return read_survey_csv(in);
}

void write_survey_csv(std::ostream& out, const SurveyData& data) {
    out << "respondent";
    for (int q = 0; q < data.questions; ++q)
        out << ',' << (data.question_ids.empty() ? "Q" + std::to_string(q + 1) : data.question_ids[static_cast<std::size_t>(q)]);
    out << "\nlevels";
    for (int v : data.levels) out << ',' << v;
    out << '\n';
    for (int n = 0; n < data.respondents; ++n) {
        out << (data.respondent_ids.empty() ? "R" + std::to_string(n + 1) : data.respondent_ids[static_cast<std::size_t>(n)]);
        for (int q = 0; q < data.questions; ++q) out << ',' << data.at(n, q);
        out << '\n';
    }
}

void write_survey_csv(const std::filesystem::path& path, const SurveyData& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_survey_csv(out, data);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace sizeclust
