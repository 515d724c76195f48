#pragma once

#include <string_view>

// Data files compiled into the library (see data/ and cmake/EmbedData.cmake).
namespace pings::data {

extern const std::string_view stopwords;
extern const std::string_view autorater_prompt;
extern const std::string_view centering_lexicon;

}  // namespace pings::data
