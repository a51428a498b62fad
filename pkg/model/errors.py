"""
异常类型
所有模块共用的错误层次
"""
import numpy as np


class FracdwError(Exception):
    """基类"""


class DomainError(FracdwError, ValueError):
    """参数越界、尺寸不匹配等输入域错误"""


class ConfigurationError(FracdwError, ValueError):
    """问题或实验配置不完整、不受支持"""


class SingularMatrixError(FracdwError, np.linalg.LinAlgError):
    """三角/三对角系统奇异"""


class RefinementError(FracdwError, RuntimeError):
    """加密序列中某一层求解失败（携带行上下文）"""

    def __init__(self, message: str, example: str, axis: str, resolution: int):
        super().__init__(message)
        self.example = example
        self.axis = axis
        self.resolution = resolution
