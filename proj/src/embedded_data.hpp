#pragma once

#include <string_view>

// Generated at configure time from data/; see src/CMakeLists.txt.
namespace bugrank::embedded {
std::string_view stopwords_en();
std::string_view affect_lexicon();
}  // namespace bugrank::embedded
