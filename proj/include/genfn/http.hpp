#pragma once

#include <genfn/accept.hpp>
#include <genfn/dispatch.hpp>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace genfn::http {

/// Malformed request; maps to 400 Bad Request.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Response {
    int status = 200;
    std::string content_type;
    std::string body;
};

/// Parses a request line and CRLF-separated headers terminated by an empty
/// line. The body, if any, is ignored.
Request parse_http_request(std::string_view raw);

/// "HTTP/1.1 <code> <reason>\r\nContent-Type: ...\r\nContent-Length: ...\r\n\r\n<body>"
std::string format_response(const Response& response);

std::string_view reason_phrase(int status);

/// The content-negotiating `respond` generic function (gf-kind accept) with
/// one method per served media type. Each method returns (media-type . body).
class Resource {
public:
    explicit Resource(const std::vector<std::string>& media_types = default_media_types());

    /// Runs the most preferred applicable method; 406 when none applies.
    Response respond(const Request& request);
    /// Full exchange on raw bytes: 400 on parse errors.
    std::string handle(std::string_view raw);

    GenericFunction& generic_function() { return *gf_; }

private:
    std::unique_ptr<GenericFunction> gf_;
};

/// Sequential HTTP/1.1 server: one request per connection, then close.
class Server {
public:
    /// Binds and listens on 127.0.0.1:`port` (0 picks a free port). Throws
    /// std::system_error on failure.
    explicit Server(std::uint16_t port, Resource resource = Resource());
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const { return port_; }
    /// Accepts and answers one connection.
    void serve_one();
    [[noreturn]] void serve_forever();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    Resource resource_;
};

} // namespace genfn::http
