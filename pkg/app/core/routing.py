"""Subcommand routing for the command-line app.

Command families declare a `CommandRouter`, decorate handlers with
`@router.command(...)`, and the application mounts them with
`app.include_router(router)`; `build_parser` turns the registry into argparse.
"""
import argparse
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Type

from app.core.exceptions import UsageError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


@dataclass(frozen=True)
class Option:
    flags: Tuple[str, ...]
    kwargs: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def of(cls, *flags: str, **kwargs: Any) -> "Option":
        return cls(flags, kwargs)


@dataclass
class Route:
    name: str
    handler: Callable[..., Dict[str, Any]]
    help: str
    options: Tuple[Option, ...]
    tags: List[str] = field(default_factory=list)


class CommandRouter:
    def __init__(self, options: Tuple[Option, ...] = ()):
        self.options = options
        self.routes: List[Route] = []

    def command(self, name: str, *, help: str, options: Tuple[Option, ...] = ()):
        def decorator(fn: Callable[..., Dict[str, Any]]):
            self.routes.append(Route(name, fn, help, self.options + options))
            return fn

        return decorator


class CommandApp:
    def __init__(self, prog: str, description: str, version: str, options: Tuple[Option, ...] = ()):
        self.prog = prog
        self.description = description
        self.version = version
        self.options = options
        self.routes: Dict[str, Route] = {}
        self._handlers: Dict[Type[BaseException], Callable[[str, Any], int]] = {}

    def include_router(self, router: CommandRouter, tags: Optional[List[str]] = None):
        for route in router.routes:
            if route.name in self.routes:
                raise ValueError(f"duplicate command {route.name!r}")
            route.tags = list(tags or [])
            self.routes[route.name] = route

    def exception_handler(self, exc_type: Type[BaseException]):
        def decorator(fn: Callable[[str, Any], int]):
            self._handlers[exc_type] = fn
            return fn

        return decorator

    def handle_exception(self, command: str, exc: BaseException) -> int:
        for klass in type(exc).__mro__:
            handler = self._handlers.get(klass)
            if handler is not None:
                return handler(command, exc)
        raise exc

    def route(self, name: str) -> Route:
        try:
            return self.routes[name]
        except KeyError:
            raise UsageError(f"unknown command {name!r}") from None

    def build_parser(self) -> argparse.ArgumentParser:
        parser = _Parser(prog=self.prog, description=self.description)
        parser.add_argument("--version", action="version", version=f"%(prog)s {self.version}")
        sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
        sub.required = True
        for route in self.routes.values():
            cmd = sub.add_parser(route.name, help=route.help, description=route.help)
            for option in self.options + route.options:
                cmd.add_argument(*option.flags, **option.kwargs)
        return parser
