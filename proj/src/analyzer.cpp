#include "entsparse/analyzer.hpp"

#include "entsparse/porter_stemmer.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace entsparse {
namespace {

enum class CharClass { separator, word, mark, ideograph };

CharClass classify(UChar32 c) {
    if (c < 0x80) {
        bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        return alnum ? CharClass::word : CharClass::separator;
    }
    if (c < 0) {
        return CharClass::separator;
    }
    switch (u_charType(c)) {
        case U_NON_SPACING_MARK:
        case U_COMBINING_SPACING_MARK:
        case U_ENCLOSING_MARK:
            return CharClass::mark;
        default:
            break;
    }
    if (u_hasBinaryProperty(c, UCHAR_IDEOGRAPHIC)) {
        return CharClass::ideograph;
    }
    UErrorCode status = U_ZERO_ERROR;
    UScriptCode script = uscript_getScript(c, &status);
    if (U_SUCCESS(status) && (script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA)) {
        return CharClass::ideograph;
    }
    return u_isalnum(c) ? CharClass::word : CharClass::separator;
}

bool is_ascii(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool is_ascii_alpha(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string strip_marks(const icu::UnicodeString& text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        std::string out;
        text.toUTF8String(out);
        return out;
    }
    icu::UnicodeString decomposed = nfd->normalize(text, status);
    icu::UnicodeString bare;
    for (int32_t i = 0; i < decomposed.length();) {
        UChar32 c = decomposed.char32At(i);
        if (u_charType(c) != U_NON_SPACING_MARK) {
            bare.append(c);
        }
        i += U16_LENGTH(c);
    }
    icu::UnicodeString composed = nfc->normalize(bare, status);
    std::string out;
    (U_SUCCESS(status) ? composed : bare).toUTF8String(out);
    return out;
}

}  // namespace

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config)) {}

std::string Analyzer::normalize(std::string_view word) const {
    std::string term;
    if (is_ascii(word)) {
        term.assign(word);
        std::transform(term.begin(), term.end(), term.begin(), [](char c) {
            return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        });
    } else {
        icu::UnicodeString u = icu::UnicodeString::fromUTF8(
            icu::StringPiece(word.data(), static_cast<int32_t>(word.size())));
        u.toLower(icu::Locale::getRoot());
        if (config_.fold_accents) {
            term = strip_marks(u);
        } else {
            u.toUTF8String(term);
        }
    }
    if (config_.stopwords.contains(term)) {
        return {};
    }
    if (config_.stem && is_ascii_alpha(term)) {
        term = porter_stem(term);
    }
    return term;
}

std::vector<TokenSpan> Analyzer::analyze_with_offsets(std::string_view text) const {
    std::vector<TokenSpan> tokens;
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());

    std::size_t word_start = 0;
    bool in_word = false;
    auto flush = [&](std::size_t end) {
        if (!in_word) {
            return;
        }
        in_word = false;
        std::string term = normalize(text.substr(word_start, end - word_start));
        if (!term.empty()) {
            tokens.push_back({std::move(term), word_start, end});
        }
    };

    int32_t i = 0;
    while (i < length) {
        const auto start = static_cast<std::size_t>(i);
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        const auto end = static_cast<std::size_t>(i);
        switch (classify(c)) {
            case CharClass::word:
                if (!in_word) {
                    in_word = true;
                    word_start = start;
                }
                break;
            case CharClass::mark:
                // marks only extend an open word
                break;
            case CharClass::ideograph:
                flush(start);
                in_word = true;
                word_start = start;
                flush(end);
                break;
            case CharClass::separator:
                flush(start);
                break;
        }
    }
    flush(text.size());
    return tokens;
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
    std::vector<std::string> terms;
    for (auto& token : analyze_with_offsets(text)) {
        terms.push_back(std::move(token.term));
    }
    return terms;
}

std::vector<std::string> analyze(std::string_view text) {
    static const Analyzer analyzer;
    return analyzer.analyze(text);
}

}  // namespace entsparse
