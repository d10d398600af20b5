#include <cmath>

#include "bugrank/features.hpp"

namespace bugrank {

ReadabilityIndices readability(const TextCounts& c) {
  ReadabilityIndices r;
  if (c.words == 0 || c.sentences == 0) return r;
  const double words = static_cast<double>(c.words);
  const double sentences = static_cast<double>(c.sentences);
  const double chars = static_cast<double>(c.characters);
  const double syllables = static_cast<double>(c.syllables);
  const double complex_words = static_cast<double>(c.complex_words);
  const double long_words = static_cast<double>(c.long_words);
  const double periods = static_cast<double>(c.periods == 0 ? 1 : c.periods);
  const double words_per_sentence = words / sentences;

  r.ari = 4.71 * (chars / words) + 0.5 * words_per_sentence - 21.43;
  r.flesch_reading_ease = 206.835 - 1.015 * words_per_sentence - 84.6 * (syllables / words);
  r.flesch_kincaid = 0.39 * words_per_sentence + 11.8 * (syllables / words) - 15.59;
  r.gunning_fog = 0.4 * (words_per_sentence + 100.0 * complex_words / words);
  r.smog = std::sqrt(complex_words * 30.0 / sentences + 3.0);
  r.coleman_liau = 0.588 * (chars / words) - 0.296 * words_per_sentence - 15.8;
  r.lix = words / periods + long_words * 100.0 / words;
  r.rix = long_words / sentences;
  return r;
}

}  // namespace bugrank
