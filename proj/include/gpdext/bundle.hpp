#ifndef GPDEXT_BUNDLE_HPP_
#define GPDEXT_BUNDLE_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "groupoid.hpp"

namespace gpdext {

  //! A family of finite groups N_u indexed by objects. Fibers are stored by
  //! object ordinal; the ordinal order is the lexicographic order of the
  //! object names, matching Groupoid::objects().
  class GroupBundle {
   public:
    GroupBundle() = default;

    GroupBundle(std::vector<std::string> objects, std::vector<FiniteGroup> fibers)
        : _objects(std::move(objects)), _fibers(std::move(fibers)) {
      if (_objects.size() != _fibers.size()) {
        fail(ErrorCode::invalid_bundle, "one fiber per object required");
      }
      if (_objects.empty()) {
        fail(ErrorCode::empty_object_set, "bundle without objects");
      }
      for (std::size_t i = 1; i < _objects.size(); ++i) {
        if (!(_objects[i - 1] < _objects[i])) {
          fail(ErrorCode::invalid_bundle, "objects must be distinct and sorted");
        }
      }
    }

    //! The same group over every object.
    static GroupBundle constant(std::vector<std::string> objects, FiniteGroup const& g) {
      std::sort(objects.begin(), objects.end());
      std::vector<FiniteGroup> fibers(objects.size(), g);
      return GroupBundle(std::move(objects), std::move(fibers));
    }

    static GroupBundle constant(Groupoid const& base, FiniteGroup const& g) {
      return constant(object_names(base), g);
    }

    static std::vector<std::string> object_names(Groupoid const& base) {
      std::vector<std::string> out;
      for (Id u : base.objects()) {
        out.push_back(base.name(u));
      }
      return out;
    }

    std::size_t nr_objects() const noexcept {
      return _objects.size();
    }

    std::vector<std::string> const& objects() const noexcept {
      return _objects;
    }

    FiniteGroup const& fiber(std::size_t ordinal) const {
      return _fibers.at(ordinal);
    }

    std::vector<FiniteGroup> const& fibers() const noexcept {
      return _fibers;
    }

    std::size_t total_size() const {
      std::size_t n = 0;
      for (auto const& f : _fibers) {
        n += f.size();
      }
      return n;
    }

    bool is_abelian() const {
      return std::all_of(_fibers.begin(), _fibers.end(), [](auto const& f) {
        return f.is_abelian();
      });
    }

    bool is_trivial() const {
      return std::all_of(_fibers.begin(), _fibers.end(), [](auto const& f) {
        return f.size() == 1;
      });
    }

    //! Z(N), fiberwise, with element names kept.
    GroupBundle center() const {
      std::vector<FiniteGroup> fibers;
      for (auto const& f : _fibers) {
        fibers.push_back(f.subgroup(f.center()));
      }
      return GroupBundle(_objects, std::move(fibers));
    }

    //! Throws DomainMismatch unless the objects are those of `base`.
    void check_over(Groupoid const& base) const {
      if (object_names(base) != _objects) {
        fail(ErrorCode::domain_mismatch, "bundle objects differ from the groupoid's");
      }
    }

    bool operator==(GroupBundle const&) const = default;

   private:
    std::vector<std::string> _objects;
    std::vector<FiniteGroup> _fibers;
  };

  using GroupBundlePtr = std::shared_ptr<GroupBundle const>;

  inline GroupBundlePtr share(GroupBundle b) {
    return std::make_shared<GroupBundle const>(std::move(b));
  }

  //! Name of fiber element n over object u inside bundle_as_groupoid: the
  //! unit 1_u is identified with u, other elements are "n@u".
  inline std::string bundle_element_name(GroupBundle const& b, std::size_t u, Local n) {
    auto const& f = b.fiber(u);
    return n == f.unit() ? b.objects()[u] : f.name(n) + "@" + b.objects()[u];
  }

  //! The disjoint union of the fibers, with s(n) = r(n) = p(n).
  inline Groupoid bundle_as_groupoid(GroupBundle const& b) {
    GroupoidTables t;
    std::vector<Id> offset;
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      offset.push_back(static_cast<Id>(t.size()));
      auto const& f = b.fiber(u);
      for (Local n = 0; n < f.size(); ++n) {
        t.names.push_back(bundle_element_name(b, u, n));
        t.is_unit.push_back(n == f.unit());
        t.source.push_back(offset[u] + f.unit());
        t.range.push_back(offset[u] + f.unit());
        t.inverse.push_back(offset[u] + f.inverse(n));
      }
    }
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      auto const& f = b.fiber(u);
      for (Local n = 0; n < f.size(); ++n) {
        for (Local m = 0; m < f.size(); ++m) {
          t.product[{offset[u] + n, offset[u] + m}] = offset[u] + f.op(n, m);
        }
      }
    }
    return Groupoid::from_tables(std::move(t));
  }

}  // namespace gpdext

#endif  // GPDEXT_BUNDLE_HPP_
