#ifndef PLAB_ERROR_HPP
#define PLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plab {

/// Root of the library error hierarchy.  `InputError` marks conditions caused
/// by malformed or inconsistent caller data (CLI exit code 2); everything else
/// signals a structural failure detected during computation.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Caller-supplied data is malformed (bad JSON, wrong shapes, unknown names).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

#define PLAB_DEFINE_ERROR(Name, Base)                                         \
    struct Name : Base {                                                       \
        explicit Name(const std::string& msg) : Base(#Name ": " + msg) {}      \
    }

// Core algebra.
PLAB_DEFINE_ERROR(AntisymmetryViolation, InputError);
PLAB_DEFINE_ERROR(DimensionMismatch, InputError);
PLAB_DEFINE_ERROR(NonConvergence, Error);

// Fields.
PLAB_DEFINE_ERROR(MixedDimensions, InputError);
PLAB_DEFINE_ERROR(JacobianIllConditioned, Error);
PLAB_DEFINE_ERROR(NoFit, Error);
PLAB_DEFINE_ERROR(NotAntisymmetric, InputError);

// Dirac.
PLAB_DEFINE_ERROR(DimensionDrop, Error);
struct NotGraph : Error {
    int intersection_dim;
    NotGraph(const std::string& msg, int dim)
        : Error("NotGraph: " + msg), intersection_dim(dim) {}
};

// Transversals.
PLAB_DEFINE_ERROR(PointNotOnX, InputError);
PLAB_DEFINE_ERROR(MixedBlockNonzero, Error);
PLAB_DEFINE_ERROR(NotTransversal, Error);

// Sprays.
PLAB_DEFINE_ERROR(SingularBase, Error);
PLAB_DEFINE_ERROR(NotMorphism, InputError);
PLAB_DEFINE_ERROR(PreimageNotTransversal, Error);
PLAB_DEFINE_ERROR(EmptyPreimage, Error);

// Groupoids.
PLAB_DEFINE_ERROR(NotInAdjointImage, Error);
PLAB_DEFINE_ERROR(NotComposable, InputError);
PLAB_DEFINE_ERROR(BlockDimensionMismatch, InputError);
PLAB_DEFINE_ERROR(NotMember, Error);

// Frobenius pairs.
PLAB_DEFINE_ERROR(NotFrobenius, Error);
PLAB_DEFINE_ERROR(SingularIsotropy, Error);

#undef PLAB_DEFINE_ERROR

}

#endif
