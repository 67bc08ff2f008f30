#pragma once

// Everything: fields, geometry, the surface, the group, the sets, analysis, certificates.
#include "h3q/certificate.hpp"
