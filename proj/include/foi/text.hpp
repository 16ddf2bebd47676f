#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace foi {

// Country labels act as identifiers, so "Türkiye" typed with a precomposed
// u-umlaut and with u + combining diaeresis must compare equal. Labels are
// therefore canonicalized on entry: UTF-8 decode, NFC-compose combining
// marks against the Latin composition table below, re-encode, trim.

namespace detail {

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

// Canonical (base, combining mark) -> precomposed pairs for the Latin-1
// Supplement and Latin Extended-A/B blocks, from the Unicode decomposition
// data. Covers every accented letter that appears in country names.
inline constexpr std::array<Composition, 252> kLatinCompositions = {{
    {0x0041, 0x0300, 0x00C0}, {0x0041, 0x0301, 0x00C1}, {0x0041, 0x0302, 0x00C2}, {0x0041, 0x0303, 0x00C3},
    {0x0041, 0x0308, 0x00C4}, {0x0041, 0x030A, 0x00C5}, {0x0043, 0x0327, 0x00C7}, {0x0045, 0x0300, 0x00C8},
    {0x0045, 0x0301, 0x00C9}, {0x0045, 0x0302, 0x00CA}, {0x0045, 0x0308, 0x00CB}, {0x0049, 0x0300, 0x00CC},
    {0x0049, 0x0301, 0x00CD}, {0x0049, 0x0302, 0x00CE}, {0x0049, 0x0308, 0x00CF}, {0x004E, 0x0303, 0x00D1},
    {0x004F, 0x0300, 0x00D2}, {0x004F, 0x0301, 0x00D3}, {0x004F, 0x0302, 0x00D4}, {0x004F, 0x0303, 0x00D5},
    {0x004F, 0x0308, 0x00D6}, {0x0055, 0x0300, 0x00D9}, {0x0055, 0x0301, 0x00DA}, {0x0055, 0x0302, 0x00DB},
    {0x0055, 0x0308, 0x00DC}, {0x0059, 0x0301, 0x00DD}, {0x0061, 0x0300, 0x00E0}, {0x0061, 0x0301, 0x00E1},
    {0x0061, 0x0302, 0x00E2}, {0x0061, 0x0303, 0x00E3}, {0x0061, 0x0308, 0x00E4}, {0x0061, 0x030A, 0x00E5},
    {0x0063, 0x0327, 0x00E7}, {0x0065, 0x0300, 0x00E8}, {0x0065, 0x0301, 0x00E9}, {0x0065, 0x0302, 0x00EA},
    {0x0065, 0x0308, 0x00EB}, {0x0069, 0x0300, 0x00EC}, {0x0069, 0x0301, 0x00ED}, {0x0069, 0x0302, 0x00EE},
    {0x0069, 0x0308, 0x00EF}, {0x006E, 0x0303, 0x00F1}, {0x006F, 0x0300, 0x00F2}, {0x006F, 0x0301, 0x00F3},
    {0x006F, 0x0302, 0x00F4}, {0x006F, 0x0303, 0x00F5}, {0x006F, 0x0308, 0x00F6}, {0x0075, 0x0300, 0x00F9},
    {0x0075, 0x0301, 0x00FA}, {0x0075, 0x0302, 0x00FB}, {0x0075, 0x0308, 0x00FC}, {0x0079, 0x0301, 0x00FD},
    {0x0079, 0x0308, 0x00FF}, {0x0041, 0x0304, 0x0100}, {0x0061, 0x0304, 0x0101}, {0x0041, 0x0306, 0x0102},
    {0x0061, 0x0306, 0x0103}, {0x0041, 0x0328, 0x0104}, {0x0061, 0x0328, 0x0105}, {0x0043, 0x0301, 0x0106},
    {0x0063, 0x0301, 0x0107}, {0x0043, 0x0302, 0x0108}, {0x0063, 0x0302, 0x0109}, {0x0043, 0x0307, 0x010A},
    {0x0063, 0x0307, 0x010B}, {0x0043, 0x030C, 0x010C}, {0x0063, 0x030C, 0x010D}, {0x0044, 0x030C, 0x010E},
    {0x0064, 0x030C, 0x010F}, {0x0045, 0x0304, 0x0112}, {0x0065, 0x0304, 0x0113}, {0x0045, 0x0306, 0x0114},
    {0x0065, 0x0306, 0x0115}, {0x0045, 0x0307, 0x0116}, {0x0065, 0x0307, 0x0117}, {0x0045, 0x0328, 0x0118},
    {0x0065, 0x0328, 0x0119}, {0x0045, 0x030C, 0x011A}, {0x0065, 0x030C, 0x011B}, {0x0047, 0x0302, 0x011C},
    {0x0067, 0x0302, 0x011D}, {0x0047, 0x0306, 0x011E}, {0x0067, 0x0306, 0x011F}, {0x0047, 0x0307, 0x0120},
    {0x0067, 0x0307, 0x0121}, {0x0047, 0x0327, 0x0122}, {0x0067, 0x0327, 0x0123}, {0x0048, 0x0302, 0x0124},
    {0x0068, 0x0302, 0x0125}, {0x0049, 0x0303, 0x0128}, {0x0069, 0x0303, 0x0129}, {0x0049, 0x0304, 0x012A},
    {0x0069, 0x0304, 0x012B}, {0x0049, 0x0306, 0x012C}, {0x0069, 0x0306, 0x012D}, {0x0049, 0x0328, 0x012E},
    {0x0069, 0x0328, 0x012F}, {0x0049, 0x0307, 0x0130}, {0x004A, 0x0302, 0x0134}, {0x006A, 0x0302, 0x0135},
    {0x004B, 0x0327, 0x0136}, {0x006B, 0x0327, 0x0137}, {0x004C, 0x0301, 0x0139}, {0x006C, 0x0301, 0x013A},
    {0x004C, 0x0327, 0x013B}, {0x006C, 0x0327, 0x013C}, {0x004C, 0x030C, 0x013D}, {0x006C, 0x030C, 0x013E},
    {0x004E, 0x0301, 0x0143}, {0x006E, 0x0301, 0x0144}, {0x004E, 0x0327, 0x0145}, {0x006E, 0x0327, 0x0146},
    {0x004E, 0x030C, 0x0147}, {0x006E, 0x030C, 0x0148}, {0x004F, 0x0304, 0x014C}, {0x006F, 0x0304, 0x014D},
    {0x004F, 0x0306, 0x014E}, {0x006F, 0x0306, 0x014F}, {0x004F, 0x030B, 0x0150}, {0x006F, 0x030B, 0x0151},
    {0x0052, 0x0301, 0x0154}, {0x0072, 0x0301, 0x0155}, {0x0052, 0x0327, 0x0156}, {0x0072, 0x0327, 0x0157},
    {0x0052, 0x030C, 0x0158}, {0x0072, 0x030C, 0x0159}, {0x0053, 0x0301, 0x015A}, {0x0073, 0x0301, 0x015B},
    {0x0053, 0x0302, 0x015C}, {0x0073, 0x0302, 0x015D}, {0x0053, 0x0327, 0x015E}, {0x0073, 0x0327, 0x015F},
    {0x0053, 0x030C, 0x0160}, {0x0073, 0x030C, 0x0161}, {0x0054, 0x0327, 0x0162}, {0x0074, 0x0327, 0x0163},
    {0x0054, 0x030C, 0x0164}, {0x0074, 0x030C, 0x0165}, {0x0055, 0x0303, 0x0168}, {0x0075, 0x0303, 0x0169},
    {0x0055, 0x0304, 0x016A}, {0x0075, 0x0304, 0x016B}, {0x0055, 0x0306, 0x016C}, {0x0075, 0x0306, 0x016D},
    {0x0055, 0x030A, 0x016E}, {0x0075, 0x030A, 0x016F}, {0x0055, 0x030B, 0x0170}, {0x0075, 0x030B, 0x0171},
    {0x0055, 0x0328, 0x0172}, {0x0075, 0x0328, 0x0173}, {0x0057, 0x0302, 0x0174}, {0x0077, 0x0302, 0x0175},
    {0x0059, 0x0302, 0x0176}, {0x0079, 0x0302, 0x0177}, {0x0059, 0x0308, 0x0178}, {0x005A, 0x0301, 0x0179},
    {0x007A, 0x0301, 0x017A}, {0x005A, 0x0307, 0x017B}, {0x007A, 0x0307, 0x017C}, {0x005A, 0x030C, 0x017D},
    {0x007A, 0x030C, 0x017E}, {0x004F, 0x031B, 0x01A0}, {0x006F, 0x031B, 0x01A1}, {0x0055, 0x031B, 0x01AF},
    {0x0075, 0x031B, 0x01B0}, {0x0041, 0x030C, 0x01CD}, {0x0061, 0x030C, 0x01CE}, {0x0049, 0x030C, 0x01CF},
    {0x0069, 0x030C, 0x01D0}, {0x004F, 0x030C, 0x01D1}, {0x006F, 0x030C, 0x01D2}, {0x0055, 0x030C, 0x01D3},
    {0x0075, 0x030C, 0x01D4}, {0x00DC, 0x0304, 0x01D5}, {0x00FC, 0x0304, 0x01D6}, {0x00DC, 0x0301, 0x01D7},
    {0x00FC, 0x0301, 0x01D8}, {0x00DC, 0x030C, 0x01D9}, {0x00FC, 0x030C, 0x01DA}, {0x00DC, 0x0300, 0x01DB},
    {0x00FC, 0x0300, 0x01DC}, {0x00C4, 0x0304, 0x01DE}, {0x00E4, 0x0304, 0x01DF}, {0x0226, 0x0304, 0x01E0},
    {0x0227, 0x0304, 0x01E1}, {0x00C6, 0x0304, 0x01E2}, {0x00E6, 0x0304, 0x01E3}, {0x0047, 0x030C, 0x01E6},
    {0x0067, 0x030C, 0x01E7}, {0x004B, 0x030C, 0x01E8}, {0x006B, 0x030C, 0x01E9}, {0x004F, 0x0328, 0x01EA},
    {0x006F, 0x0328, 0x01EB}, {0x01EA, 0x0304, 0x01EC}, {0x01EB, 0x0304, 0x01ED}, {0x01B7, 0x030C, 0x01EE},
    {0x0292, 0x030C, 0x01EF}, {0x006A, 0x030C, 0x01F0}, {0x0047, 0x0301, 0x01F4}, {0x0067, 0x0301, 0x01F5},
    {0x004E, 0x0300, 0x01F8}, {0x006E, 0x0300, 0x01F9}, {0x00C5, 0x0301, 0x01FA}, {0x00E5, 0x0301, 0x01FB},
    {0x00C6, 0x0301, 0x01FC}, {0x00E6, 0x0301, 0x01FD}, {0x00D8, 0x0301, 0x01FE}, {0x00F8, 0x0301, 0x01FF},
    {0x0041, 0x030F, 0x0200}, {0x0061, 0x030F, 0x0201}, {0x0041, 0x0311, 0x0202}, {0x0061, 0x0311, 0x0203},
    {0x0045, 0x030F, 0x0204}, {0x0065, 0x030F, 0x0205}, {0x0045, 0x0311, 0x0206}, {0x0065, 0x0311, 0x0207},
    {0x0049, 0x030F, 0x0208}, {0x0069, 0x030F, 0x0209}, {0x0049, 0x0311, 0x020A}, {0x0069, 0x0311, 0x020B},
    {0x004F, 0x030F, 0x020C}, {0x006F, 0x030F, 0x020D}, {0x004F, 0x0311, 0x020E}, {0x006F, 0x0311, 0x020F},
    {0x0052, 0x030F, 0x0210}, {0x0072, 0x030F, 0x0211}, {0x0052, 0x0311, 0x0212}, {0x0072, 0x0311, 0x0213},
    {0x0055, 0x030F, 0x0214}, {0x0075, 0x030F, 0x0215}, {0x0055, 0x0311, 0x0216}, {0x0075, 0x0311, 0x0217},
    {0x0053, 0x0326, 0x0218}, {0x0073, 0x0326, 0x0219}, {0x0054, 0x0326, 0x021A}, {0x0074, 0x0326, 0x021B},
    {0x0048, 0x030C, 0x021E}, {0x0068, 0x030C, 0x021F}, {0x0041, 0x0307, 0x0226}, {0x0061, 0x0307, 0x0227},
    {0x0045, 0x0327, 0x0228}, {0x0065, 0x0327, 0x0229}, {0x00D6, 0x0304, 0x022A}, {0x00F6, 0x0304, 0x022B},
    {0x00D5, 0x0304, 0x022C}, {0x00F5, 0x0304, 0x022D}, {0x004F, 0x0307, 0x022E}, {0x006F, 0x0307, 0x022F},
    {0x022E, 0x0304, 0x0230}, {0x022F, 0x0304, 0x0231}, {0x0059, 0x0304, 0x0232}, {0x0079, 0x0304, 0x0233},
}};

inline constexpr char32_t kReplacementChar = 0xFFFD;

inline std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            extra = 3;
        } else {
            out.push_back(kReplacementChar);
            ++i;
            continue;
        }
        if (extra > 0 && i + extra >= s.size()) {
            out.push_back(kReplacementChar);
            break;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(kReplacementChar);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += 1 + extra;
    }
    return out;
}

inline void utf8_encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool compose_pair(char32_t base, char32_t mark, char32_t& composed) {
    for (const auto& e : kLatinCompositions) {
        if (e.base == base && e.mark == mark) {
            composed = e.composed;
            return true;
        }
    }
    return false;
}

inline bool is_combining_mark(char32_t cp) {
    return cp >= 0x0300 && cp <= 0x036F;
}

inline bool is_label_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' || cp == 0x00A0;
}

} // namespace detail

/// NFC-composes combining-mark sequences (Latin repertoire) and trims
/// surrounding whitespace. Identity on plain ASCII.
inline std::string normalize_label(std::string_view raw) {
    std::vector<char32_t> cps = detail::utf8_decode(raw);

    // Compose (base, mark) pairs left to right; repeated marks compose
    // iteratively, so "u + diaeresis + macron" folds into one code point.
    std::vector<char32_t> composed;
    composed.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!composed.empty() && detail::is_combining_mark(cp)) {
            char32_t merged;
            if (detail::compose_pair(composed.back(), cp, merged)) {
                composed.back() = merged;
                continue;
            }
        }
        composed.push_back(cp);
    }

    std::size_t begin = 0;
    std::size_t end = composed.size();
    while (begin < end && detail::is_label_space(composed[begin])) ++begin;
    while (end > begin && detail::is_label_space(composed[end - 1])) --end;

    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = begin; i < end; ++i) detail::utf8_encode(composed[i], out);
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace foi
