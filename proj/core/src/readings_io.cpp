#include "puf/readings_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace puf::io {

namespace {

std::vector<std::string> split_fields(const std::string &line)
{
	std::vector<std::string> fields;
	std::size_t start = 0;
	while (true) {
		std::size_t pos = line.find(',', start);
		if (pos == std::string::npos) {
			fields.push_back(line.substr(start));
			break;
		}
		fields.push_back(line.substr(start, pos - start));
		start = pos + 1;
	}
	return fields;
}

int parse_int(const std::string &s, const std::string &where)
{
	int v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size()) {
		throw IoError(where + ": not an integer: '" + s + "'");
	}
	return v;
}

double parse_double(const std::string &s, const std::string &where)
{
	try {
		std::size_t used = 0;
		double v = std::stod(s, &used);
		if (used != s.size()) {
			throw std::invalid_argument(s);
		}
		return v;
	} catch (const std::exception &) {
		throw IoError(where + ": not a number: '" + s + "'");
	}
}

std::string format_temp(double v)
{
	std::ostringstream os;
	os.precision(2);
	os << std::fixed << v;
	return os.str();
}

} // namespace

std::vector<Reading> parse_readings(std::istream &in, const std::string &source_name)
{
	std::vector<Reading> readings;
	std::string line;
	std::size_t line_no = 0;
	std::size_t expected_bits = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.empty() || line.front() == '#') {
			continue;
		}
		const std::string where = source_name + ":" + std::to_string(line_no);
		std::vector<std::string> fields = split_fields(line);
		if (fields.size() != 6) {
			throw IoError(where + ": expected 6 comma-separated fields, got " +
				      std::to_string(fields.size()));
		}
		Reading r;
		r.device_id = fields[0];
		r.board_type = fields[1];
		if (r.device_id.empty()) {
			throw IoError(where + ": empty device id");
		}
		r.nominal_temp_c = parse_int(fields[2], where);
		r.sensor_temp_c = parse_double(fields[3], where);
		int run = parse_int(fields[4], where);
		if (run < 0) {
			throw IoError(where + ": run index must be non-negative");
		}
		r.run_index = static_cast<std::uint32_t>(run);
		try {
			r.fingerprint = Fingerprint::from_hex(fields[5]);
		} catch (const ValidationError &e) {
			throw IoError(where + ": " + e.what());
		}
		if (expected_bits == 0) {
			expected_bits = r.fingerprint.length_bits();
		} else if (r.fingerprint.length_bits() != expected_bits) {
			throw IoError(where + ": fingerprint length " +
				      std::to_string(r.fingerprint.length_bits()) + " differs from " +
				      std::to_string(expected_bits) + " used earlier in the file");
		}
		readings.push_back(std::move(r));
	}
	std::stable_sort(readings.begin(), readings.end(), [](const Reading &a, const Reading &b) {
		return std::tie(a.device_id, a.nominal_temp_c, a.run_index) <
		       std::tie(b.device_id, b.nominal_temp_c, b.run_index);
	});
	return readings;
}

std::vector<Reading> load_readings(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open readings file: " + path.string());
	}
	return parse_readings(in, path.filename().string());
}

std::string format_reading(const Reading &reading)
{
	std::string out;
	out += reading.device_id;
	out += ',';
	out += reading.board_type;
	out += ',';
	out += std::to_string(reading.nominal_temp_c);
	out += ',';
	out += format_temp(reading.sensor_temp_c);
	out += ',';
	out += std::to_string(reading.run_index);
	out += ',';
	out += reading.fingerprint.to_hex();
	return out;
}

void write_text_atomic(const std::filesystem::path &path, const std::string &content)
{
	if (path.has_parent_path()) {
		std::filesystem::create_directories(path.parent_path());
	}
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw IoError("cannot write: " + tmp.string());
		}
		out << content;
		if (!out.flush()) {
			throw IoError("write failed: " + tmp.string());
		}
	}
	std::filesystem::rename(tmp, path);
}

void write_readings(const std::filesystem::path &path, std::span<const Reading> readings)
{
	std::string content;
	content += "# device_id,board_type,nominal_temp_c,sensor_temp_c,run_index,fingerprint_hex\n";
	for (const Reading &r : readings) {
		content += format_reading(r);
		content += '\n';
	}
	write_text_atomic(path, content);
}

Reading reference_as_record(const ReferenceFingerprint &ref, const std::string &board_type)
{
	Reading record;
	record.device_id = ref.device_id;
	record.board_type = board_type + ".ref";
	record.nominal_temp_c = ref.source_temp_c;
	record.sensor_temp_c = static_cast<double>(ref.source_temp_c);
	record.run_index = static_cast<std::uint32_t>(ref.source_count);
	record.fingerprint = ref.fingerprint;
	return record;
}

bool is_reference_record(const Reading &record)
{
	return record.board_type.size() > 4 && record.board_type.ends_with(".ref");
}

ReferenceFingerprint record_as_reference(const Reading &record)
{
	if (!is_reference_record(record)) {
		throw IoError("record for device '" + record.device_id + "' is not a reference (.ref) record");
	}
	ReferenceFingerprint ref;
	ref.device_id = record.device_id;
	ref.source_temp_c = record.nominal_temp_c;
	ref.source_count = record.run_index;
	ref.fingerprint = record.fingerprint;
	ref.tie_mask = Fingerprint(record.fingerprint.length_bits());
	return ref;
}

void write_references(const std::filesystem::path &path, std::span<const ReferenceFingerprint> refs,
		      const std::string &board_type)
{
	std::vector<Reading> records;
	records.reserve(refs.size());
	for (const ReferenceFingerprint &ref : refs) {
		records.push_back(reference_as_record(ref, board_type));
	}
	write_readings(path, records);
}

std::vector<ReferenceFingerprint> load_references(const std::filesystem::path &path)
{
	std::vector<ReferenceFingerprint> refs;
	for (const Reading &record : load_readings(path)) {
		refs.push_back(record_as_reference(record));
	}
	return refs;
}

} // namespace puf::io
