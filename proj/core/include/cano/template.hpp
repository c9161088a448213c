#pragma once

#include <map>
#include <optional>
#include <string>

#include "cano/cloud.hpp"
#include "cano/mesh.hpp"
#include "cano/symmetry.hpp"

namespace cano {

/// Canonical reference instance of a category. The cloud lives in the
/// canonical frame (z up) and is normalized to the unit sphere.
struct CategoryTemplate {
  std::string category;
  std::string template_id;
  LabeledCloud cloud;
  std::optional<Mesh> mesh;
  SymmetrySpec symmetry;
  std::string axis_convention;  // free text, e.g. "x = front, z = up"
};

/// One template per category.
class TemplateRegistry {
 public:
  /// Replaces any template already registered for the same category.
  void add(CategoryTemplate tmpl);
  bool contains(const std::string& category) const { return templates_.count(category) != 0; }
  /// Throws unregistered-category.
  const CategoryTemplate& at(const std::string& category) const;
  const std::map<std::string, CategoryTemplate>& all() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

 private:
  std::map<std::string, CategoryTemplate> templates_;
};

}  // namespace cano
