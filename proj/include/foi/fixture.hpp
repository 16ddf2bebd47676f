#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "foi/error.hpp"
#include "foi/hash.hpp"
#include "foi/text.hpp"

namespace foi {

struct FoiRow {
    double f, o, i;
};

struct FixtureCluster {
    int number = 0;
    std::string name;
    std::optional<double> gg_mean;   // green-growth factor-score mean; n/a for Switzerland
    std::vector<std::string> members;
};

struct FixtureLoading {
    std::string factor_group;
    std::string variable;
    double component1 = 0.0;
    double component2 = 0.0;
};

/// Bundled reference dataset: the 2020 F/O/I indices of the 38 OECD
/// countries, the 11-cluster reference partition with green-growth factor
/// means, and the 15x2 rotated-loadings table of the Future-potential
/// factor model. Values are verbatim transcriptions guarded by a checksum.
struct FoiFixture {
    std::vector<std::pair<std::string, FoiRow>> indices;
    std::vector<FixtureCluster> reference_partition;
    std::vector<FixtureLoading> reference_loadings;

    const FoiRow* find(std::string_view country) const {
        std::string key = normalize_label(country);
        for (const auto& [name, row] : indices)
            if (name == key) return &row;
        return nullptr;
    }

    std::optional<double> gg_mean(std::string_view cluster_name) const {
        for (const auto& c : reference_partition)
            if (c.name == cluster_name) return c.gg_mean;
        return std::nullopt;
    }

    std::vector<std::string> singleton_clusters() const {
        std::vector<std::string> out;
        for (const auto& c : reference_partition)
            if (c.members.size() == 1) out.push_back(c.members.front());
        return out;
    }
};

namespace detail {

// One country per line: name,F,O,I. The cluster block lists
// number,name,green-growth mean ("n/a" when not computable),members
// joined by '|'. The loadings block lists factor group, variable and the
// two rotated components exactly as printed in the source tables,
// including the uneven decimal counts (0.21, 0.83, 0.02).
inline constexpr std::string_view kFixtureText =
    "[indices]\n"
    "Australia,3.80,5.34,4.63\n"
    "Austria,4.42,5.08,3.92\n"
    "Belgium,3.82,4.87,3.59\n"
    "Canada,4.00,4.93,4.64\n"
    "Chile,3.65,3.90,3.78\n"
    "Colombia,3.17,2.68,3.12\n"
    "Costa Rica,3.31,3.65,1.96\n"
    "Czech Republic,3.75,4.18,3.25\n"
    "Denmark,4.92,5.01,4.71\n"
    "Estonia,4.16,4.73,3.61\n"
    "Finland,4.63,5.07,4.95\n"
    "France,4.16,4.30,3.53\n"
    "Germany,4.36,4.70,4.49\n"
    "Greece,3.29,2.86,1.94\n"
    "Hungary,3.08,4.40,2.61\n"
    "Iceland,5.34,4.23,4.96\n"
    "Ireland,4.27,4.60,4.95\n"
    "Israel,4.52,4.59,4.10\n"
    "Italy,3.54,3.53,2.66\n"
    "Japan,4.67,3.72,4.11\n"
    "Korea,4.30,4.28,3.77\n"
    "Latvia,3.51,4.21,3.40\n"
    "Lithuania,3.63,4.34,3.62\n"
    "Luxembourg,3.80,6.11,4.61\n"
    "Mexico,3.04,4.12,3.26\n"
    "Netherlands,4.27,5.27,5.33\n"
    "New Zealand,4.54,5.08,4.78\n"
    "Norway,4.70,4.87,4.86\n"
    "Poland,3.69,4.00,3.12\n"
    "Portugal,3.93,3.67,3.14\n"
    "Slovak Republic,3.40,4.76,2.92\n"
    "Slovenia,3.99,4.49,3.20\n"
    "Spain,3.17,4.02,3.14\n"
    "Sweden,4.93,4.93,4.56\n"
    "Switzerland,5.19,5.39,5.65\n"
    "Turkey,3.14,3.16,3.07\n"
    "United Kingdom,3.85,5.33,4.66\n"
    "United States,3.89,5.39,5.30\n"
    "[clusters]\n"
    "1,Market-oriented,-0.47,Australia|Canada|Netherlands|United Kingdom|United States\n"
    "2,Welfare-participatory,0.60,Austria|Denmark|Finland|Germany|Ireland|Israel|New Zealand|Norway|Sweden\n"
    "3,Statist 1 (welfare),-0.52,Belgium|Estonia|France|Korea|Slovenia\n"
    "4,Statist 2 (protectionist),-0.04,Chile|Czech Republic|Italy|Latvia|Lithuania|Mexico|Poland|Portugal|Spain\n"
    "5,Laggard 1 (rising),-0.49,Colombia|Turkey\n"
    "6,Laggard 2 (falling),0.18,Costa Rica|Greece\n"
    "7,Statist 3 (open),-0.65,Hungary|Slovak Republic\n"
    "8,Iceland,2.34,Iceland\n"
    "9,Japan,-1.45,Japan\n"
    "10,Luxembourg,1.08,Luxembourg\n"
    "11,Switzerland,n/a,Switzerland\n"
    "[loadings]\n"
    "Government quality,Efficiency of legal framework in settling disputes,0.921,0.21\n"
    "Government quality,Property rights,0.902,0.29\n"
    "Government quality,Government ensuring policy stability,0.833,0.299\n"
    "Government quality,Strength of auditing and accounting standards,0.83,0.155\n"
    "Government quality,Share of population with tertiary education,0.787,0.022\n"
    "Government quality,Patent applications per million pop.,0.762,-0.159\n"
    "Government quality,Incidence of corruption,0.756,0.312\n"
    "Government quality,R&D expenditures,0.746,-0.109\n"
    "Government quality,Life expectancy at birth,0.638,0.363\n"
    "Government quality,Contracting with Government,-0.518,0.19\n"
    "Green growth,Total expenditure on educational institutions,0.442,0.167\n"
    "Green growth,Production-based CO2 productivity,0.02,0.713\n"
    "Green growth,Emissions priced above EUR 30 per ton of CO2,0.109,0.707\n"
    "Green growth,Renewable energy,0.072,0.685\n"
    "Green growth,Population connected to public sewerage,0.068,0.595\n";

inline constexpr std::string_view kFixtureSha256 =
    "12826a5bee78d0e2fb6fc162c8183f201c8d47b56c87492d006a9d665990238a";

inline double parse_fixture_number(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::FixtureCorrupt, "bad numeric field '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline FoiFixture parse_fixture(std::string_view text, std::string_view expected_sha256) {
    if (sha256_hex(text) != expected_sha256)
        throw Error(ErrorCode::FixtureCorrupt, "bundled dataset failed its checksum");

    FoiFixture fixture;
    enum class Section { None, Indices, Clusters, Loadings } section = Section::None;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        if (line == "[indices]") { section = Section::Indices; continue; }
        if (line == "[clusters]") { section = Section::Clusters; continue; }
        if (line == "[loadings]") { section = Section::Loadings; continue; }

        auto fields = split(line, ',');
        switch (section) {
            case Section::Indices: {
                if (fields.size() != 4) throw Error(ErrorCode::FixtureCorrupt, "bad index row");
                FoiRow row{parse_fixture_number(fields[1]), parse_fixture_number(fields[2]),
                           parse_fixture_number(fields[3])};
                fixture.indices.emplace_back(fields[0], row);
                break;
            }
            case Section::Clusters: {
                if (fields.size() != 4) throw Error(ErrorCode::FixtureCorrupt, "bad cluster row");
                FixtureCluster cluster;
                cluster.number = static_cast<int>(parse_fixture_number(fields[0]));
                cluster.name = fields[1];
                if (fields[2] != "n/a") cluster.gg_mean = parse_fixture_number(fields[2]);
                cluster.members = split(fields[3], '|');
                fixture.reference_partition.push_back(std::move(cluster));
                break;
            }
            case Section::Loadings: {
                if (fields.size() != 4) throw Error(ErrorCode::FixtureCorrupt, "bad loading row");
                fixture.reference_loadings.push_back(
                    {fields[0], fields[1], parse_fixture_number(fields[2]), parse_fixture_number(fields[3])});
                break;
            }
            case Section::None:
                throw Error(ErrorCode::FixtureCorrupt, "content before first section header");
        }
    }

    if (fixture.indices.size() != 38)
        throw Error(ErrorCode::FixtureCorrupt, "expected 38 countries");
    if (fixture.reference_partition.size() != 11)
        throw Error(ErrorCode::FixtureCorrupt, "expected 11 reference clusters");
    if (fixture.reference_loadings.size() != 15)
        throw Error(ErrorCode::FixtureCorrupt, "expected 15 loading rows");
    std::size_t assigned = 0;
    for (const auto& c : fixture.reference_partition) assigned += c.members.size();
    if (assigned != 38)
        throw Error(ErrorCode::FixtureCorrupt, "reference clusters do not cover 38 countries");
    return fixture;
}

} // namespace detail

inline const FoiFixture& load_foi_fixture() {
    static const FoiFixture fixture = detail::parse_fixture(detail::kFixtureText, detail::kFixtureSha256);
    return fixture;
}

inline std::string_view fixture_raw_text() { return detail::kFixtureText; }

} // namespace foi
