#pragma once

#include <string>
#include <vector>

#include "arena/rng.hpp"

namespace arena {

// Category paths ("A > B > C") used to seed tree construction.
const std::vector<std::string>& default_topics();

// Leaf segment of a category path, used as the search query.
std::string topic_query(const std::string& category);

std::string sample_topic(Rng& rng);

}  // namespace arena
