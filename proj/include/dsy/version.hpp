#pragma once

namespace dsy {

inline constexpr const char* library_version = "0.1.0";
/// Version of schema/result_record.schema.json that records conform to.
inline constexpr const char* result_schema_version = "1.0.0";

}  // namespace dsy
