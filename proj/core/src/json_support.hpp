#pragma once

#include <string>

#include "json.hpp"

#include "fjlab/errors.hpp"

namespace fjlab {

/// Line/column of a byte offset into text, both 1-based.
inline std::pair<int, int> lineColumnAt(const std::string& text,
                                        std::size_t byte) {
    int line = 1;
    int column = 1;
    const std::size_t stop = byte > 0 ? byte - 1 : 0;
    for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline nlohmann::json parseJsonText(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = lineColumnAt(text, e.byte);
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + " column " +
                        std::to_string(column) + ": " + e.what());
    }
}

}  // namespace fjlab
