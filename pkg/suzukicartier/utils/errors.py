from typing import Any, Dict, Optional
from loguru import logger

class SuzukiError(Exception):
    """Base exception class for the suzukicartier package."""
    
    def __init__(
        self,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        original_error: Optional[Exception] = None
    ) -> None:
        """
        Initialize error with context and original error.
        
        Args:
            message: Error description
            context: Additional error context
            original_error: Original exception if this is a wrapper
        """
        super().__init__(message)
        self.message = message
        self.context = context or {}
        self.original_error = original_error
        
        # Log the error with context
        logger.opt(depth=1).error(
            "{message}",
            message=self.message,
            error_type=self.__class__.__name__,
            **self.context
        )

class ConfigurationError(SuzukiError):
    """Raised when configuration loading or validation fails."""
    pass

class ValidationError(ConfigurationError):
    """Raised when configuration validation fails."""
    pass

class EnvironmentVariableError(ConfigurationError):
    """Raised when an environment variable holds an unusable value."""
    pass

class ParameterError(SuzukiError):
    """Raised for curve parameters outside the supported range."""
    pass

class FieldError(SuzukiError):
    """Raised when finite field arithmetic is misused."""
    pass

class FieldMismatchError(FieldError):
    """Raised when elements of different fields are combined."""
    pass

class BoundExceededError(FieldError):
    """Raised when a brute-force computation exceeds its size bound."""
    pass

class InternalInvariantError(SuzukiError):
    """Raised when a proven structural property fails to hold at runtime."""
    pass

class NotRegularFormError(SuzukiError):
    """Raised when a function is outside the span it is being expressed in."""
    pass

class DimensionError(SuzukiError):
    """Raised on matrix dimension mismatches."""
    pass

class CacheError(SuzukiError):
    """Raised when a matrix cache file cannot be read or written."""
    pass

class CorruptHeaderError(CacheError):
    """Raised when a cache header has a bad magic, version or trailer."""
    pass

class DimensionMismatchError(CacheError):
    """Raised when the cached genus does not match the header's m."""
    pass

class ShortReadError(CacheError):
    """Raised when a cache file ends before the declared payload."""
    pass

class InconsistentProfileError(SuzukiError):
    """Raised when a rank profile cannot satisfy the final-type step bounds."""
    pass

class EnumerationCapError(SuzukiError):
    """Raised when the number of compatible final types exceeds the cap."""

    def __init__(self, message: str, count: int, free_gaps: int, cap: int) -> None:
        self.count = count
        self.free_gaps = free_gaps
        self.cap = cap
        super().__init__(
            message,
            context={"count": str(count), "free_gaps": free_gaps, "cap": cap}
        )
