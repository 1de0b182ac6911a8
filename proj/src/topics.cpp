#include "arena/topics.hpp"

namespace arena {

const std::vector<std::string>& default_topics() {
  static const std::vector<std::string> topics = {
      "Computers & Electronics > Software > Operating Systems",
      "Games > Computer & Video Games > Gaming Media & Reference",
      "Law & Government > Legal",
      "Arts & Entertainment > Movies > DVD & Video Shopping",
      "Arts & Entertainment > Online Media > Online Image Galleries",
      "Games > Computer & Video Games",
      "Health > Health Conditions > Respiratory Conditions",
      "Arts & Entertainment > Entertainment Industry > Film & TV Industry",
      "Law & Government > Public Safety > Public Health",
      "Sports > Individual Sports",
      "People & Society > Social Sciences",
      "Health > Mental Health > Learning & Developmental Disabilities",
      "Shopping > Apparel",
      "Shopping > Entertainment Media > DVD & Video Shopping",
      "Health > Vision Care",
      "Jobs & Education > Jobs",
      "Computers & Electronics > Consumer Electronics > Gadgets & Portable Electronics",
      "Arts & Entertainment > Music & Audio > Rock Music",
      "Books & Literature",
      "Online Communities",
      "Arts & Entertainment > Music & Audio > Music Equipment & Technology",
      "Online Communities > Dating & Personals",
      "Business & Industrial > Advertising & Marketing",
      "Beauty & Fitness",
      "Health > Public Health",
      "Law & Government > Government",
      "Sports > Team Sports",
  };
  return topics;
}

std::string topic_query(const std::string& category) {
  const auto pos = category.rfind('>');
  std::string leaf = pos == std::string::npos ? category : category.substr(pos + 1);
  const auto b = leaf.find_first_not_of(' ');
  const auto e = leaf.find_last_not_of(' ');
  return b == std::string::npos ? std::string{} : leaf.substr(b, e - b + 1);
}

std::string sample_topic(Rng& rng) {
  const auto& topics = default_topics();
  return topics[rng.index(topics.size())];
}

}  // namespace arena
