#include "roughstart/rng.hpp"
