#pragma once

#include "modalcert/adapters.hpp"
#include "modalcert/certificate.hpp"
#include "modalcert/errors.hpp"
#include "modalcert/evidence_io.hpp"
#include "modalcert/formula_text.hpp"
#include "modalcert/index.hpp"
#include "modalcert/kernel.hpp"
#include "modalcert/layers.hpp"
#include "modalcert/modal.hpp"
#include "modalcert/oracle.hpp"
#include "modalcert/plist.hpp"
#include "modalcert/polarized.hpp"
#include "modalcert/search.hpp"
