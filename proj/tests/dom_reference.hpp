#pragma once

// Whole-document reference decoder for Posts.xml built on Boost.PropertyTree,
// used as an oracle for the streaming parser.

#include <cstdio>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "bugrank/records.hpp"
#include "oracles.hpp"

namespace oracle {

inline bugrank::Timestamp reference_time(const std::string& s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, ms = 0;
  const int n = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d.%d", &y, &mo, &d, &h, &mi, &sec, &ms);
  if (n < 6) throw std::runtime_error("bad timestamp " + s);
  if (n == 6) ms = 0;
  const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  const std::int64_t total = ((days * 24 + h) * 60 + mi) * 60 + sec;
  return bugrank::Timestamp{std::chrono::milliseconds(total * 1000 + ms)};
}

inline std::vector<bugrank::RawPost> reference_posts(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  pt::read_xml(path, doc);
  std::vector<bugrank::RawPost> out;
  for (const auto& [name, node] : doc.get_child("posts")) {
    if (name != "row") continue;
    const auto attrs = node.get_child_optional("<xmlattr>");
    if (!attrs) continue;
    const auto id = attrs->get_optional<std::int64_t>("Id");
    const auto type = attrs->get_optional<int>("PostTypeId");
    if (!id || !type || (*type != 1 && *type != 2)) continue;
    bugrank::RawPost p;
    p.id = *id;
    p.post_type = static_cast<bugrank::PostType>(*type);
    const auto opt = [&](const char* key) -> std::optional<std::int64_t> {
      if (auto v = attrs->get_optional<std::int64_t>(key)) return *v;
      return std::nullopt;
    };
    p.accepted_answer_id = opt("AcceptedAnswerId");
    p.parent_id = opt("ParentId");
    p.score = opt("Score").value_or(0);
    p.view_count = opt("ViewCount");
    p.owner_user_id = opt("OwnerUserId");
    p.answer_count = opt("AnswerCount");
    p.comment_count = opt("CommentCount");
    p.favorite_count = opt("FavoriteCount");
    if (auto v = attrs->get_optional<std::string>("CreationDate")) p.creation_date = reference_time(*v);
    p.body = attrs->get<std::string>("Body", "");
    if (auto v = attrs->get_optional<std::string>("Title")) p.title = *v;
    if (auto v = attrs->get_optional<std::string>("Tags")) p.tags = *v;
    if (p.is_answer() && (!p.parent_id || p.title)) continue;
    if (p.is_question() && p.parent_id) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace oracle
