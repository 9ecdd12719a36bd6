#include <genfn/http.hpp>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <system_error>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

namespace genfn::http {

namespace {

constexpr std::size_t max_request_bytes = 64 * 1024;

bool is_tchar(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return std::string_view("!#$%&'*+-.^_`|~").find(c) != std::string_view::npos;
}

bool is_token(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_tchar); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string body_for(const std::string& media_type) {
    if (media_type == "text/html") return "<!DOCTYPE html>\n<html><body><p>hello</p></body></html>\n";
    if (media_type == "application/xml") return "<?xml version=\"1.0\"?>\n<greeting>hello</greeting>\n";
    if (media_type == "text/plain") return "hello\n";
    return "hello (" + media_type + ")\n";
}

void send_all(int fd, std::string_view data) {
    while (!data.empty()) {
        ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n <= 0) {
            if (n < 0 && errno == EINTR) continue;
            return;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

} // namespace

Request parse_http_request(std::string_view raw) {
    auto end = raw.find("\r\n\r\n");
    if (end == std::string_view::npos) throw ParseError("request head is not terminated by an empty line");
    std::string_view head = raw.substr(0, end + 2);

    auto line_end = head.find("\r\n");
    std::string_view request_line = head.substr(0, line_end);
    auto sp1 = request_line.find(' ');
    auto sp2 = sp1 == std::string_view::npos ? sp1 : request_line.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos || request_line.find(' ', sp2 + 1) != std::string_view::npos)
        throw ParseError("malformed request line");
    std::string_view method = request_line.substr(0, sp1);
    std::string_view path = request_line.substr(sp1 + 1, sp2 - sp1 - 1);
    std::string_view version = request_line.substr(sp2 + 1);
    if (!is_token(method)) throw ParseError("malformed method");
    if (path.empty() || std::any_of(path.begin(), path.end(), [](unsigned char c) { return c <= 0x20 || c == 0x7f; }))
        throw ParseError("malformed request target");
    if (version != "HTTP/1.1" && version != "HTTP/1.0") throw ParseError("unsupported HTTP version");

    Request request;
    request.method = std::string(method);
    request.path = std::string(path);

    std::size_t pos = line_end + 2;
    while (pos < head.size()) {
        auto next = head.find("\r\n", pos);
        std::string_view line = head.substr(pos, next - pos);
        pos = next + 2;
        auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("header line without ':'");
        std::string_view name = line.substr(0, colon);
        if (!is_token(name)) throw ParseError("malformed header name");
        std::string_view value = trim(line.substr(colon + 1));
        if (std::any_of(value.begin(), value.end(), [](unsigned char c) { return c == '\r' || c == '\n' || c == 0; }))
            throw ParseError("control character in header value");
        request.headers.emplace_back(std::string(name), std::string(value));
    }
    return request;
}

std::string_view reason_phrase(int status) {
    switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 406: return "Not Acceptable";
    }
    return "Unknown";
}

std::string format_response(const Response& response) {
    std::string out = "HTTP/1.1 " + std::to_string(response.status) + " " + std::string(reason_phrase(response.status)) + "\r\n";
    out += "Content-Type: " + response.content_type + "\r\n";
    out += "Content-Length: " + std::to_string(response.body.size()) + "\r\n\r\n";
    out += response.body;
    return out;
}

Resource::Resource(const std::vector<std::string>& media_types)
    : gf_(std::make_unique<GenericFunction>(intern("respond"), 1, accept_strategy())) {
    for (const auto& type : media_types) {
        auto spec = make_accept_specializer(type);
        const auto& media_type = static_cast<const AcceptSpecializer&>(*spec).media_type();
        Value result = cons(Value::string(media_type), Value::string(body_for(media_type)));
        gf_->add_method(make_method({spec}, [result](std::span<const Value>, const NextMethod&) { return result; }));
    }
}

Response Resource::respond(const Request& request) {
    try {
        Value result = (*gf_)({make_request(request)});
        return Response{200, car(result).as_string(), cdr(result).as_string()};
    } catch (const NoApplicableMethod&) {
        return Response{406, "text/plain", "not acceptable\n"};
    }
}

std::string Resource::handle(std::string_view raw) {
    Request request;
    try {
        request = parse_http_request(raw);
    } catch (const ParseError&) {
        return format_response(Response{400, "text/plain", "bad request\n"});
    }
    return format_response(respond(request));
}

Server::Server(std::uint16_t port, Resource resource) : resource_(std::move(resource)) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0) {
        int err = errno;
        ::close(fd_);
        throw std::system_error(err, std::generic_category(), "bind port " + std::to_string(port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

Server::~Server() {
    if (fd_ >= 0) ::close(fd_);
}

void Server::serve_one() {
    int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) return;
    timeval timeout{5, 0};
    ::setsockopt(client, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof timeout);

    std::string raw;
    char buf[4096];
    while (raw.size() < max_request_bytes && raw.find("\r\n\r\n") == std::string::npos) {
        ssize_t n = ::recv(client, buf, sizeof buf, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        raw.append(buf, static_cast<std::size_t>(n));
    }
    if (!raw.empty()) send_all(client, resource_.handle(raw));
    ::close(client);
}

void Server::serve_forever() {
    for (;;) serve_one();
}

} // namespace genfn::http
