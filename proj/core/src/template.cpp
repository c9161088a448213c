#include "cano/template.hpp"

#include "cano/error.hpp"

namespace cano {

void TemplateRegistry::add(CategoryTemplate tmpl) {
  std::string key = tmpl.category;
  templates_.insert_or_assign(std::move(key), std::move(tmpl));
}

const CategoryTemplate& TemplateRegistry::at(const std::string& category) const {
  const auto it = templates_.find(category);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kUnregisteredCategory, "no template registered for category '" + category + "'");
  }
  return it->second;
}

}  // namespace cano
