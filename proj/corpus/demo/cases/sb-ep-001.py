import requests
import os

API_HOST = 'https://api.switch-bot.com'
DEVICELIST_URL = f'{API_HOST}/v1.0/devices'
HEADERS = {
    'Authorization': os.getenv('OPEN_TOKEN'),
    'sign': os.getenv('SIGN'),
    't': os.getenv('T'),
    'nonce': os.getenv('NONCE'),
}


def get_device_list():
    response = requests.get(DEVICELIST_URL, headers=HEADERS)
    response.raise_for_status()
    return response.json()
