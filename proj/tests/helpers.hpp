#pragma once

#include <string>
#include <vector>

#include "spanshadow/bicategory.hpp"

namespace testing_helpers {

using namespace spanshadow;

inline Element A(const std::string& s) { return Element::atom(s); }
inline Element P(Element a, Element b) { return Element::pair(std::move(a), std::move(b)); }

inline IndexedSpace space(const std::string& name, int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(name + std::to_string(i));
  return IndexedSpace::absolute(FinSet::atoms(name, labels));
}

/// 1-cell with counts[i][j] elements over (src_i, dst_j).
inline Cell1 cell(const std::string& name, const IndexedSpace& src, const IndexedSpace& dst,
                  const std::vector<std::vector<int>>& counts) {
  std::vector<Element> elems, images;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j)
      for (int k = 0; k < counts[i][j]; ++k) {
        elems.push_back(A(name + std::to_string(i) + std::to_string(j) + "_" + std::to_string(k)));
        images.push_back(P(src.space.at(i), dst.space.at(j)));
      }
  return Cell1::from_images(src, dst, FinSet(name, elems), images);
}

/// The map a_i ↦ a_{idx[i]} between numbered spaces.
inline FinMap table(const IndexedSpace& s, const IndexedSpace& t, const std::vector<int>& idx) {
  std::vector<Element> im;
  for (int i : idx) im.push_back(t.space.at(static_cast<std::size_t>(i)));
  return FinMap::tabled(s.space, t.space, im);
}

}  // namespace testing_helpers
